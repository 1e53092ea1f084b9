#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "helmdd/mesh.hpp"
#include "helmdd/types.hpp"

namespace helmdd {

struct Subdomain {
  int id = 0;
  std::array<int, 2> coord{1, 1};  // checkerboard coordinates, 1-based
  Box interior;                    // Omega_int,j
  Box outer;                       // Omega_j
  // Sides in order x-lo, x-hi, y-lo, y-hi; true where the side lies on the boundary of Omega_int.
  std::array<bool, 4> on_boundary{true, true, true, true};

  bool on_boundary_side(int dir, bool hi) const { return on_boundary[2 * dir + (hi ? 1 : 0)]; }
};

struct Decomposition {
  std::array<int, 2> dims{1, 1};
  double delta = 1.0 / 40;
  double kappa = 1.0 / 40;
  double kappa0 = 1.0 / 40;
  double L1 = 1.0;
  double L2 = 1.0;
  double bump_shrink = 0.3;  // bumps live on (a + 0.3 delta, b - 0.3 delta)
  bool checkerboard = true;  // false for decompositions built from explicit boxes
  std::vector<Subdomain> subdomains;

  int size() const { return static_cast<int>(subdomains.size()); }
  // Number of directions with more than one cell.
  int dimensionality() const { return (dims[0] > 1) + (dims[1] > 1); }
  int index_of(int cx, int cy) const { return (cx - 1) + dims[0] * (cy - 1); }
  Box domain() const { return {Point(-kappa, -kappa), Point(L1 + kappa, L2 + kappa)}; }

  // Every coordinate that has to lie on an element edge.
  std::vector<double> breakpoints() const;

  // Closed region of Omega_j where g_{l,j} differs from g_l.
  bool in_mismatch(int j, const Point& x) const;
  // Closed support of chi_j.
  Box chi_support(int j) const;
  // Support of the enlarged cutoff used by the ray module; still disjoint from the mismatch region.
  Box cutoff_support(int j) const;
};

Decomposition make_strip(int N, double delta, double kappa, double kappa0, double L1 = 1.0,
                         double L2 = 1.0);
Decomposition make_checkerboard(std::array<int, 2> dims, double delta, double kappa, double kappa0,
                                double L1 = 1.0, double L2 = 1.0);
// Arbitrary interior boxes inside (0,L1)x(0,L2); coordinates are left at (1,1).
Decomposition make_from_boxes(const std::vector<Box>& interiors, double delta, double kappa,
                              double kappa0, double L1 = 1.0, double L2 = 1.0);

struct RegionTag {
  RegionKind kind = RegionKind::interior;
  std::uint64_t membership = 0;  // bit j set when the element lies in Omega_j
};

// One tag per element, element index = ey * ne_x + ex.
std::vector<RegionTag> region_tags(const StructuredMesh& mesh, const Decomposition& dec);

// Node block of Omega_j on the global mesh.
struct SubdomainNodes {
  int ix0 = 0;
  int iy0 = 0;
  int nx = 0;
  int ny = 0;
  std::vector<int> global;  // local index -> global node

  int size() const { return nx * ny; }
  bool is_boundary(int local) const {
    int i = local % nx, j = local / nx;
    return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
  }
};

SubdomainNodes subdomain_nodes(const StructuredMesh& mesh, const Box& outer);

struct PartitionOfUnity {
  std::vector<RVector> chi;        // global nodal values
  std::vector<RVector> chi_gt;     // chi_j^>: indicator, one element ring around supp chi_j
  std::vector<RVector> chi_tilde;  // one more ring

  int size() const { return static_cast<int>(chi.size()); }
};

// Unnormalized one-dimensional bump on the interior interval (a, b). A side flagged as lying on
// the outer boundary gets the one-sided profile; both flags give the constant 1.
double bump_1d(double x, double a, double b, bool lo_on_boundary, bool hi_on_boundary,
               double delta, double shrink = 0.3);

PartitionOfUnity build_pou(const Decomposition& dec, const StructuredMesh& mesh);

// Discrete restriction and prolongation for one subdomain.
class Transfer {
 public:
  Transfer() = default;
  Transfer(SubdomainNodes nodes, RVector chi_local, int n_global);

  const SubdomainNodes& nodes() const { return nodes_; }
  const RVector& chi() const { return chi_; }
  int local_size() const { return nodes_.size(); }
  int global_size() const { return n_global_; }

  template <typename Scalar>
  Vector<Scalar> restrict_vec(const Vector<Scalar>& w) const {
    check_global(w.size());
    Vector<Scalar> out(nodes_.size());
    for (int l = 0; l < nodes_.size(); ++l) out[l] = w[nodes_.global[l]];
    return out;
  }

  // Residual restricted to local test functions; zero on the subdomain boundary.
  template <typename Scalar>
  Vector<Scalar> restrict_dual(const Vector<Scalar>& r) const {
    Vector<Scalar> out = restrict_vec(r);
    for (int l = 0; l < nodes_.size(); ++l)
      if (nodes_.is_boundary(l)) out[l] = Scalar(0);
    return out;
  }

  template <typename Scalar>
  Vector<Scalar> prolong(const Vector<Scalar>& v) const {
    Vector<Scalar> out = Vector<Scalar>::Zero(n_global_);
    add_prolong(v, out);
    return out;
  }

  template <typename Scalar>
  void add_prolong(const Vector<Scalar>& v, Vector<Scalar>& out) const {
    check_local(v.size());
    check_global(out.size());
    for (int l = 0; l < nodes_.size(); ++l) out[nodes_.global[l]] += v[l];
  }

  template <typename Scalar>
  Vector<Scalar> weighted_prolong(const Vector<Scalar>& v) const {
    Vector<Scalar> out = Vector<Scalar>::Zero(n_global_);
    add_weighted_prolong(v, out);
    return out;
  }

  template <typename Scalar>
  void add_weighted_prolong(const Vector<Scalar>& v, Vector<Scalar>& out) const {
    check_local(v.size());
    check_global(out.size());
    for (int l = 0; l < nodes_.size(); ++l) out[nodes_.global[l]] += chi_[l] * v[l];
  }

 private:
  void check_local(Eigen::Index n) const;
  void check_global(Eigen::Index n) const;

  SubdomainNodes nodes_;
  RVector chi_;
  int n_global_ = 0;
};

std::vector<Transfer> transfer_operators(const Decomposition& dec, const StructuredMesh& mesh,
                                         const PartitionOfUnity& pou);

}  // namespace helmdd
