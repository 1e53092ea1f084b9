#pragma once

#include <vector>

#include "helmdd/types.hpp"

namespace helmdd {

enum class RegionKind { interior, layer_x, layer_y, corner };

const char* to_string(RegionKind kind);

struct HRule {
  double exponent = 1.25;
  // Elements per unit length; 0 selects the smallest admissible value with h <= k^-exponent.
  int elements_per_unit = 0;
  // Extra coordinates that must land on element edges (subdomain boxes, overlap offsets).
  std::vector<double> breakpoints;
};

// Uniform tensor-product Q_p mesh of (-kappa, L1+kappa) x (-kappa, L2+kappa).
// Nodes are numbered lexicographically, x fastest: index = iy * nx + ix.
struct StructuredMesh {
  double L1 = 1.0;
  double L2 = 1.0;
  double kappa = 0.0;
  int degree = 1;
  int n = 1;  // elements per unit length
  double h = 1.0;
  int ne_x = 0;
  int ne_y = 0;
  int nx = 0;
  int ny = 0;
  int kappa_cells = 0;  // kappa * n

  int n_nodes() const { return nx * ny; }
  int n_elements() const { return ne_x * ne_y; }
  int index(int ix, int iy) const { return iy * nx + ix; }
  int ix(int node) const { return node % nx; }
  int iy(int node) const { return node / nx; }

  double x(int ix) const;
  double y(int iy) const;
  Point coord(int node) const { return {x(ix(node)), y(iy(node))}; }

  // Index of the node line through coordinate t; throws GeometryError when t is off the node grid.
  int node_line_x(double t) const;
  int node_line_y(double t) const;

  bool is_boundary(int node) const;
  RegionKind element_kind(int ex, int ey) const;
  RegionKind point_kind(const Point& p) const;
};

// Smallest m such that every breakpoint times m is an integer.
int alignment_denominator(const std::vector<double>& breakpoints);

StructuredMesh build_mesh(double L1, double L2, double kappa, double k, int degree,
                          const HRule& rule = {});

}  // namespace helmdd
