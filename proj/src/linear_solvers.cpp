#include "helmdd/linear_solvers.hpp"

#include <vector>

#include <Eigen/SparseLU>

#include "helmdd/errors.hpp"

#ifdef HELMDD_WITH_UMFPACK
#include <umfpack.h>
#endif

namespace helmdd {

#ifdef HELMDD_WITH_UMFPACK

struct Factorization::Impl {
  int n = 0;
  void* numeric = nullptr;

  ~Impl() {
    if (numeric) umfpack_zi_free_numeric(&numeric);
  }
};

Factorization::Factorization(const CSparse& a_in) {
  if (a_in.rows() != a_in.cols()) throw NumericalError("factorization needs a square matrix");
  CSparse a = a_in;
  a.makeCompressed();
  n_ = static_cast<int>(a.rows());
  auto impl = std::make_shared<Impl>();
  impl->n = n_;
  // The row-major arrays of A are the column-major arrays of A^T; solves use UMFPACK_Aat.
  const int* ap = a.outerIndexPtr();
  const int* ai = a.innerIndexPtr();
  const double* ax = reinterpret_cast<const double*>(a.valuePtr());
  double control[UMFPACK_CONTROL], info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  void* symbolic = nullptr;
  int status = umfpack_zi_symbolic(n_, n_, ap, ai, ax, nullptr, &symbolic, control, info);
  if (status != UMFPACK_OK) throw NumericalError("symbolic factorization failed, status " + std::to_string(status));
  status = umfpack_zi_numeric(ap, ai, ax, nullptr, symbolic, &impl->numeric, control, info);
  umfpack_zi_free_symbolic(&symbolic);
  if (status == UMFPACK_WARNING_singular_matrix) {
    long row = -1;
    std::vector<int> P(n_), Q(n_);
    std::vector<double> dx(n_), dz(n_);
    int do_recip = 0;
    umfpack_zi_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                           P.data(), Q.data(), dx.data(), dz.data(), &do_recip,
                           nullptr, impl->numeric);
    for (int k = 0; k < n_; ++k) {
      if (dx[k] == 0.0 && dz[k] == 0.0) {
        row = Q[k];
        break;
      }
    }
    throw SingularPivotError("singular pivot in sparse factorization", row);
  }
  if (status != UMFPACK_OK) throw NumericalError("numeric factorization failed, status " + std::to_string(status));
  stats_.backend = "umfpack";
  stats_.nnz_l = static_cast<long>(info[UMFPACK_LNZ]);
  stats_.nnz_u = static_cast<long>(info[UMFPACK_UNZ]);
  impl_ = impl;
}

CVector Factorization::solve(const CVector& b) const {
  if (!impl_) throw NumericalError("solve called on an empty factorization");
  if (b.size() != n_) throw std::out_of_range("right-hand side has the wrong length");
  CVector x(n_);
  double control[UMFPACK_CONTROL], info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  control[UMFPACK_IRSTEP] = 0;
  int status = umfpack_zi_solve(UMFPACK_Aat, nullptr, nullptr, nullptr, nullptr,
                                reinterpret_cast<double*>(x.data()), nullptr,
                                reinterpret_cast<const double*>(b.data()), nullptr, impl_->numeric,
                                control, info);
  if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix)
    throw NumericalError("triangular solve failed, status " + std::to_string(status));
  return x;
}

#else

struct Factorization::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization(const CSparse& a) {
  if (a.rows() != a.cols()) throw NumericalError("factorization needs a square matrix");
  n_ = static_cast<int>(a.rows());
  auto impl = std::make_shared<Impl>();
  Eigen::SparseMatrix<Complex, Eigen::ColMajor, int> ac = a;
  ac.makeCompressed();
  impl->lu.analyzePattern(ac);
  impl->lu.factorize(ac);
  if (impl->lu.info() != Eigen::Success)
    throw SingularPivotError("sparse factorization failed: " + impl->lu.lastErrorMessage(), -1);
  stats_.backend = "eigen-sparselu";
  stats_.nnz_l = impl->lu.nnzL();
  stats_.nnz_u = impl->lu.nnzU();
  impl_ = impl;
}

CVector Factorization::solve(const CVector& b) const {
  if (!impl_) throw NumericalError("solve called on an empty factorization");
  if (b.size() != n_) throw std::out_of_range("right-hand side has the wrong length");
  return impl_->lu.solve(b);
}

#endif

}  // namespace helmdd
