#pragma once

#include <string>
#include <vector>

#include "helmdd/assembly.hpp"
#include "helmdd/decomposition.hpp"
#include "helmdd/linear_solvers.hpp"
#include "helmdd/orderings.hpp"
#include "helmdd/types.hpp"

namespace helmdd {

// B^-1 r = sum_j weighted_prolong_j(A_j^-1 restrict_dual_j(r)).
class RasPreconditioner {
 public:
  RasPreconditioner() = default;
  RasPreconditioner(std::vector<Transfer> transfers, std::vector<Factorization> local, int threads = 1);

  int size() const { return static_cast<int>(transfers_.size()); }
  const Transfer& transfer(int j) const { return transfers_[j]; }
  const Factorization& local(int j) const { return local_[j]; }

  // A_j^-1 R_j r as a subdomain vector.
  CVector local_correction(int j, const CVector& r) const;
  CVector apply(const CVector& r) const;
  CVector operator()(const CVector& r) const { return apply(r); }

 private:
  std::vector<Transfer> transfers_;
  std::vector<Factorization> local_;
  int threads_ = 1;
};

CVector ras_apply(const RasPreconditioner& pre, const CVector& r);

// Relative residual ||A (u - u^n)|| / ||A (u - u^0)||; falls back to ||f|| when u^0 = u.
class ResidualMetric {
 public:
  ResidualMetric(const CSparse& A, const CVector& f, CVector u_ref, const CVector& u0);

  double operator()(const CVector& un) const;
  double denominator() const { return denom_; }
  const CVector& reference() const { return u_ref_; }

 private:
  const CSparse* A_;
  CVector u_ref_;
  double denom_ = 1.0;
};

struct StopRule {
  int max_iters = 50;
  double tol = 0.0;  // 0: run all max_iters
  bool stop_at_tol = true;
  int min_iters = 0;  // keep iterating at least this long after reaching tol
  double divergence = 1e6;
  bool track_local_errors = false;
};

struct IterationTrace {
  std::string method;
  std::vector<double> rel_residual;  // entry n after n iterations
  std::vector<double> wall_ms;       // cumulative
  std::vector<std::vector<double>> local_errors;  // ||chi_j (u - u_j^n)||, when tracked
  bool converged = false;
  bool diverged = false;
  int iterations = -1;  // smallest n with rel_residual[n] < tol, -1 if never reached

  // Smallest n with rel_residual[n] < tol, recomputed from the stored entries.
  int first_below(double tol) const;
};

void write_trace_csv(const IterationTrace& trace, const std::string& path);
void write_trace_json(const IterationTrace& trace, const std::string& path);

struct SchwarzResult {
  CVector u;
  IterationTrace trace;
};

SchwarzResult run_parallel(const RasPreconditioner& pre, const CSparse& A, const CVector& f,
                           const CVector& u0, const StopRule& stop, const ResidualMetric& metric);

// One iteration is one pass over `schedule` (for example a forward and a backward sweep).
SchwarzResult run_sequential(const RasPreconditioner& pre, const CSparse& A, const CVector& f,
                             const CVector& u0, const std::vector<Ordering>& schedule,
                             const StopRule& stop, const ResidualMetric& metric);

std::vector<Ordering> forward_backward(int n);

}  // namespace helmdd
