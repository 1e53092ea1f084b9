#include "helmdd/schwarz.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <thread>

#include "json.hpp"

#include "helmdd/errors.hpp"

namespace helmdd {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

RasPreconditioner::RasPreconditioner(std::vector<Transfer> transfers, std::vector<Factorization> local,
                                     int threads)
    : transfers_(std::move(transfers)), local_(std::move(local)), threads_(std::max(1, threads)) {
  if (transfers_.size() != local_.size()) throw ConfigError("one factorization per subdomain required");
  for (std::size_t j = 0; j < local_.size(); ++j)
    if (local_[j].size() != transfers_[j].local_size())
      throw ConfigError("local factorization size does not match subdomain " + std::to_string(j));
}

CVector RasPreconditioner::local_correction(int j, const CVector& r) const {
  return local_[j].solve(transfers_[j].restrict_dual(r));
}

CVector RasPreconditioner::apply(const CVector& r) const {
  const int J = size();
  std::vector<CVector> corr(J);
  if (threads_ > 1 && J > 1) {
    std::vector<std::thread> pool;
    const int nt = std::min(threads_, J);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (int j = t; j < J; j += nt) corr[j] = local_correction(j, r);
      });
    for (auto& th : pool) th.join();
  } else {
    for (int j = 0; j < J; ++j) corr[j] = local_correction(j, r);
  }
  CVector out = CVector::Zero(r.size());
  for (int j = 0; j < J; ++j) transfers_[j].add_weighted_prolong(corr[j], out);
  return out;
}

CVector ras_apply(const RasPreconditioner& pre, const CVector& r) { return pre.apply(r); }

ResidualMetric::ResidualMetric(const CSparse& A, const CVector& f, CVector u_ref, const CVector& u0)
    : A_(&A), u_ref_(std::move(u_ref)) {
  double d = (A * (u_ref_ - u0)).norm();
  double fn = f.norm();
  denom_ = d > 1e-12 * fn ? d : fn;
  if (!(denom_ > 0)) denom_ = 1.0;
}

double ResidualMetric::operator()(const CVector& un) const {
  return (*A_ * (u_ref_ - un)).norm() / denom_;
}

int IterationTrace::first_below(double tol) const {
  for (std::size_t n = 0; n < rel_residual.size(); ++n)
    if (rel_residual[n] < tol) return static_cast<int>(n);
  return -1;
}

void write_trace_csv(const IterationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "iter,rel_residual,wall_ms\n" << std::setprecision(10);
  for (std::size_t n = 0; n < trace.rel_residual.size(); ++n)
    out << n << ',' << trace.rel_residual[n] << ',' << (n < trace.wall_ms.size() ? trace.wall_ms[n] : 0.0) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_trace_json(const IterationTrace& trace, const std::string& path) {
  nlohmann::json j;
  j["method"] = trace.method;
  j["rel_residual"] = trace.rel_residual;
  j["wall_ms"] = trace.wall_ms;
  j["converged"] = trace.converged;
  j["diverged"] = trace.diverged;
  j["iterations"] = trace.iterations;
  if (!trace.local_errors.empty()) j["local_errors"] = trace.local_errors;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

namespace {

// Returns true when the iteration should stop.
bool record(IterationTrace& tr, double res, Clock::time_point t0, const StopRule& stop) {
  tr.rel_residual.push_back(res);
  tr.wall_ms.push_back(ms_since(t0));
  int n = static_cast<int>(tr.rel_residual.size()) - 1;
  if (!std::isfinite(res) || res > stop.divergence) {
    tr.diverged = true;
    return true;
  }
  if (stop.tol > 0 && res < stop.tol && tr.iterations < 0) {
    tr.iterations = n;
    tr.converged = true;
  }
  return tr.converged && stop.stop_at_tol && n >= stop.min_iters;
}

std::vector<double> local_errors(const RasPreconditioner& pre, const CVector& u_ref,
                                 const std::vector<CVector>& locals) {
  std::vector<double> e(pre.size());
  for (int j = 0; j < pre.size(); ++j) {
    const Transfer& t = pre.transfer(j);
    CVector d = t.restrict_vec(u_ref) - locals[j];
    e[j] = (t.chi().cast<Complex>().cwiseProduct(d)).norm();
  }
  return e;
}

}  // namespace

SchwarzResult run_parallel(const RasPreconditioner& pre, const CSparse& A, const CVector& f,
                           const CVector& u0, const StopRule& stop, const ResidualMetric& metric) {
  SchwarzResult out;
  out.trace.method = "ras_fixed_point";
  out.u = u0;
  auto t0 = Clock::now();
  std::vector<CVector> locals(pre.size());
  if (stop.track_local_errors) {
    for (int j = 0; j < pre.size(); ++j) locals[j] = pre.transfer(j).restrict_vec(u0);
    out.trace.local_errors.push_back(local_errors(pre, metric.reference(), locals));
  }
  if (record(out.trace, metric(out.u), t0, stop)) return out;
  for (int n = 1; n <= stop.max_iters; ++n) {
    CVector r = f - A * out.u;
    if (stop.track_local_errors) {
      CVector next = out.u;
      for (int j = 0; j < pre.size(); ++j) {
        CVector c = pre.local_correction(j, r);
        locals[j] = pre.transfer(j).restrict_vec(out.u) + c;
        pre.transfer(j).add_weighted_prolong(c, next);
      }
      out.u = std::move(next);
      out.trace.local_errors.push_back(local_errors(pre, metric.reference(), locals));
    } else {
      out.u += pre.apply(r);
    }
    if (record(out.trace, metric(out.u), t0, stop)) break;
  }
  return out;
}

SchwarzResult run_sequential(const RasPreconditioner& pre, const CSparse& A, const CVector& f,
                             const CVector& u0, const std::vector<Ordering>& schedule,
                             const StopRule& stop, const ResidualMetric& metric) {
  if (schedule.empty()) throw ConfigError("sequential schedule must not be empty");
  for (const Ordering& o : schedule)
    if (o.size() != pre.size()) throw ConfigError("ordering size does not match the decomposition");
  SchwarzResult out;
  out.trace.method = "rms";
  auto t0 = Clock::now();
  const int J = pre.size();
  std::vector<CVector> locals(J);
  for (int j = 0; j < J; ++j) locals[j] = pre.transfer(j).restrict_vec(u0);
  CVector ustar = u0;
  if (stop.track_local_errors) out.trace.local_errors.push_back(local_errors(pre, metric.reference(), locals));
  if (record(out.trace, metric(ustar), t0, stop)) {
    out.u = ustar;
    return out;
  }
  const int* outer = A.outerIndexPtr();
  const int* inner = A.innerIndexPtr();
  const Complex* val = A.valuePtr();
  for (int n = 1; n <= stop.max_iters; ++n) {
    for (const Ordering& sigma : schedule) {
      for (int i = 0; i < J; ++i) {
        const int j = sigma.at(i);
        const Transfer& t = pre.transfer(j);
        const SubdomainNodes& nodes = t.nodes();
        // Residual rows of Omega_j only.
        CVector rj(nodes.size());
        for (int l = 0; l < nodes.size(); ++l) {
          if (nodes.is_boundary(l)) {
            rj[l] = 0.0;
            continue;
          }
          int row = nodes.global[l];
          Complex s = f[row];
          for (int p = outer[row]; p < outer[row + 1]; ++p) s -= val[p] * ustar[inner[p]];
          rj[l] = s;
        }
        CVector c = pre.local(j).solve(rj);
        CVector fresh = t.restrict_vec(ustar) + c;
        CVector delta = fresh - locals[j];
        t.add_weighted_prolong(delta, ustar);
        locals[j] = std::move(fresh);
      }
    }
    if (stop.track_local_errors) out.trace.local_errors.push_back(local_errors(pre, metric.reference(), locals));
    if (record(out.trace, metric(ustar), t0, stop)) break;
  }
  out.u = ustar;
  return out;
}

std::vector<Ordering> forward_backward(int n) {
  Ordering fwd = Ordering::identity(n);
  return {fwd, fwd.reversed()};
}

}  // namespace helmdd
