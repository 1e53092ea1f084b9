#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include "helmdd/types.hpp"

namespace helmdd {

struct FactorStats {
  std::string backend;
  long nnz_l = 0;
  long nnz_u = 0;
};

// Sparse LU of a square complex matrix; immutable and shareable once built.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(const CSparse& a);

  CVector solve(const CVector& b) const;
  int size() const { return n_; }
  const FactorStats& stats() const { return stats_; }
  bool valid() const { return static_cast<bool>(impl_); }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  int n_ = 0;
  FactorStats stats_;
};

inline Factorization sparse_factorize(const CSparse& a) { return Factorization(a); }
inline CVector sparse_solve(const Factorization& f, const CVector& b) { return f.solve(b); }

struct KrylovTrace {
  std::vector<double> residuals;  // ||r^n||_2 of the operator system, n = 0, 1, ...
  bool converged = false;
  bool breakdown = false;
  int iterations = 0;
  double orthogonality_loss = 0.0;  // max |<v_i, v_j>|, i != j, when requested
};

template <typename Scalar>
struct GmresOptions {
  double tol = 1e-6;
  int maxit = 200;
  bool check_orthogonality = false;
  // Called with (n, x^n) after every iteration; a true return stops the iteration and replaces
  // the built-in relative residual test.
  std::function<bool(int, const Vector<Scalar>&)> monitor;
};

// Full GMRES, modified Gram-Schmidt with one reorthogonalization pass.
template <typename Scalar, typename Op>
Vector<Scalar> gmres(const Op& op, const Vector<Scalar>& b, const Vector<Scalar>& x0,
                     const GmresOptions<Scalar>& opts, KrylovTrace& trace) {
  using Vec = Vector<Scalar>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  trace = KrylovTrace{};
  Vec r0 = b - op(x0);
  const double beta = r0.norm();
  trace.residuals.push_back(beta);
  if (beta == 0.0) {
    trace.converged = true;
    return x0;
  }
  const int m = std::max(opts.maxit, 1);
  std::vector<Vec> V;
  V.reserve(m + 1);
  V.push_back(r0 / beta);
  Mat H = Mat::Zero(m + 1, m);
  Vec g = Vec::Zero(m + 1);
  g[0] = beta;
  std::vector<Eigen::JacobiRotation<Scalar>> rot;

  auto solution = [&](int cols) {
    Vec y = H.topLeftCorner(cols, cols).template triangularView<Eigen::Upper>().solve(g.head(cols));
    Vec x = x0;
    for (int i = 0; i < cols; ++i) x += y[i] * V[i];
    return x;
  };

  int j = 0;
  bool stop = false;
  for (; j < m && !stop; ++j) {
    Vec w = op(V[j]);
    const double wnorm0 = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        Scalar hij = V[i].dot(w);
        H(i, j) += hij;
        w -= hij * V[i];
      }
    }
    const double hnext = w.norm();
    H(j + 1, j) = hnext;
    Vec col = H.col(j);
    for (int i = 0; i < j; ++i) col.applyOnTheLeft(i, i + 1, rot[i].adjoint());
    Eigen::JacobiRotation<Scalar> G;
    G.makeGivens(col[j], col[j + 1]);
    col.applyOnTheLeft(j, j + 1, G.adjoint());
    col[j + 1] = Scalar(0);
    H.col(j) = col;
    g.applyOnTheLeft(j, j + 1, G.adjoint());
    rot.push_back(G);
    trace.residuals.push_back(std::abs(g[j + 1]));
    trace.iterations = j + 1;

    if (hnext <= 1e-14 * std::max(wnorm0, 1e-300)) {
      trace.breakdown = true;
      trace.converged = true;
      stop = true;
    } else {
      V.push_back(w / hnext);
    }
    if (opts.monitor) {
      if (opts.monitor(j + 1, solution(j + 1))) {
        trace.converged = true;
        stop = true;
      }
    } else if (std::abs(g[j + 1]) < opts.tol * beta) {
      trace.converged = true;
      stop = true;
    }
  }

  if (opts.check_orthogonality) {
    double loss = 0.0;
    for (std::size_t a = 0; a < V.size(); ++a)
      for (std::size_t c = a + 1; c < V.size(); ++c) loss = std::max(loss, std::abs(V[a].dot(V[c])));
    trace.orthogonality_loss = loss;
  }
  return solution(trace.iterations);
}

}  // namespace helmdd
