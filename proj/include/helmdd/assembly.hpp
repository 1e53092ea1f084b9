#pragma once

#include <functional>
#include <string>
#include <vector>

#include "helmdd/absorber.hpp"
#include "helmdd/decomposition.hpp"
#include "helmdd/mesh.hpp"
#include "helmdd/types.hpp"

namespace helmdd {

// Matrix of a(phi_q, phi_r) on a node block, row r / column q, homogeneous Dirichlet rows
// replaced by identity rows with their columns cleared elsewhere.
struct SparseComplexSystem {
  CSparse matrix;
  std::vector<char> dirichlet;
  int subdomain = -1;  // -1 for the global system
  SubdomainNodes nodes;
  int underresolved_elements = 0;

  int size() const { return static_cast<int>(matrix.rows()); }
};

struct AssemblyOptions {
  int quad_points = 0;  // 0 selects degree + 2
  double underresolved_threshold = 10.0;
  // Optional element mask for linearity checks; element index = ey * ne_x + ex.
  std::function<bool(int)> element_filter;
};

// Gauss-Legendre rule on [0, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre_01(int n);

// Lagrange basis on equispaced points of [0, 1].
double lagrange_1d(int degree, int a, double t);
double lagrange_1d_derivative(int degree, int a, double t);

SparseComplexSystem assemble_box(const StructuredMesh& mesh, const SubdomainNodes& nodes,
                                 const LocalOperator& op, double k, const AssemblyOptions& opts = {});

LocalOperator global_operator(const StructuredMesh& mesh, const AbsorberSpec& absorber,
                              const WaveSpeedField& c, const DiffusionField& A);
LocalOperator local_operator(int j, const Decomposition& dec, const AbsorberSpec& absorber,
                             const WaveSpeedField& c, const DiffusionField& A);

SparseComplexSystem assemble_global(const StructuredMesh& mesh, const AbsorberSpec& absorber,
                                    const WaveSpeedField& c, const DiffusionField& A, double k,
                                    const AssemblyOptions& opts = {});
SparseComplexSystem assemble_local(int j, const Decomposition& dec, const StructuredMesh& mesh,
                                   const AbsorberSpec& absorber, const WaveSpeedField& c,
                                   const DiffusionField& A, double k,
                                   const AssemblyOptions& opts = {});

// int f phi_r over elements inside `support`, zero on Dirichlet rows.
CVector assemble_load_fn(const StructuredMesh& mesh, const std::function<Complex(const Point&)>& f,
                         const Box& support, int quad_points = 0);
// f = J0(k |x - x0|) on the interior domain.
CVector assemble_load(const StructuredMesh& mesh, double k, const Point& x0,
                      bool interior_only = true);

// L2 norm of u_h - exact over the mesh, with a (degree + 3)-point rule.
double l2_error(const StructuredMesh& mesh, const CVector& uh,
                const std::function<Complex(const Point&)>& exact);

void write_matrix_market(const CSparse& a, const std::string& path);

}  // namespace helmdd
