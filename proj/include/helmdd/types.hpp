#pragma once

#include <complex>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace helmdd {

using Complex = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, int>;

using CVector = Vector<Complex>;
using RVector = Vector<double>;
using CSparse = SparseMatrix<Complex>;

using Point = Eigen::Vector2d;

// Closed axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
struct Box {
  Point lo = Point::Zero();
  Point hi = Point::Zero();

  bool contains(const Point& p, double tol = 0.0) const {
    return p.x() >= lo.x() - tol && p.x() <= hi.x() + tol && p.y() >= lo.y() - tol &&
           p.y() <= hi.y() + tol;
  }
  bool contains_strictly(const Point& p) const {
    return p.x() > lo.x() && p.x() < hi.x() && p.y() > lo.y() && p.y() < hi.y();
  }
  Box inflated(double e) const { return {lo.array() - e, hi.array() + e}; }
  bool empty() const { return !(hi.x() > lo.x() && hi.y() > lo.y()); }
};

inline Box intersect(const Box& a, const Box& b) {
  return {a.lo.cwiseMax(b.lo), a.hi.cwiseMin(b.hi)};
}

}  // namespace helmdd
