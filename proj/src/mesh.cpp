#include "helmdd/mesh.hpp"

#include <cmath>
#include <sstream>

#include "helmdd/errors.hpp"

namespace helmdd {

namespace {

constexpr int kMaxDenominator = 100000;

bool is_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::abs(v)); }

int to_integer(double v, const char* what, int n) {
  double scaled = v * n;
  if (!is_integer(scaled)) {
    std::ostringstream msg;
    msg << "breakpoint-not-on-grid: " << what << " = " << v << " is not a multiple of h = 1/" << n;
    throw GeometryError(msg.str());
  }
  return static_cast<int>(std::lround(scaled));
}

int node_line(double t, double kappa, int n, int degree, int count) {
  double s = (t + kappa) * n * degree;
  if (!is_integer(s)) {
    std::ostringstream msg;
    msg << "breakpoint-not-on-grid: coordinate " << t << " is not on a node line";
    throw GeometryError(msg.str());
  }
  long i = std::lround(s);
  if (i < 0 || i >= count) {
    std::ostringstream msg;
    msg << "coordinate " << t << " lies outside the mesh";
    throw GeometryError(msg.str());
  }
  return static_cast<int>(i);
}

}  // namespace

const char* to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::interior: return "interior";
    case RegionKind::layer_x: return "layer_x";
    case RegionKind::layer_y: return "layer_y";
    case RegionKind::corner: return "corner";
  }
  return "?";
}

double StructuredMesh::x(int i) const {
  int shift = degree * kappa_cells;
  return static_cast<double>(i - shift) / (degree * n);
}

double StructuredMesh::y(int j) const { return x(j); }

int StructuredMesh::node_line_x(double t) const { return node_line(t, kappa, n, degree, nx); }
int StructuredMesh::node_line_y(double t) const { return node_line(t, kappa, n, degree, ny); }

bool StructuredMesh::is_boundary(int node) const {
  int i = ix(node), j = iy(node);
  return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
}

RegionKind StructuredMesh::point_kind(const Point& p) const {
  bool lx = p.x() < 0.0 || p.x() > L1;
  bool ly = p.y() < 0.0 || p.y() > L2;
  if (lx && ly) return RegionKind::corner;
  if (lx) return RegionKind::layer_x;
  if (ly) return RegionKind::layer_y;
  return RegionKind::interior;
}

RegionKind StructuredMesh::element_kind(int ex, int ey) const {
  Point c(x(degree * ex) + 0.5 * h, y(degree * ey) + 0.5 * h);
  return point_kind(c);
}

int alignment_denominator(const std::vector<double>& breakpoints) {
  for (int m = 1; m <= kMaxDenominator; ++m) {
    bool ok = true;
    for (double b : breakpoints) {
      if (!is_integer(b * m)) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  throw GeometryError("breakpoint-not-on-grid: no common grid for the breakpoints up to 1/" +
                      std::to_string(kMaxDenominator));
}

StructuredMesh build_mesh(double L1, double L2, double kappa, double k, int degree,
                          const HRule& rule) {
  if (!(L1 > 0 && L2 > 0 && kappa > 0)) throw ConfigError("lengths and PML width must be positive");
  if (degree != 1 && degree != 2) throw ConfigError("degree must be 1 or 2");

  std::vector<double> bps = rule.breakpoints;
  bps.push_back(L1);
  bps.push_back(L2);
  bps.push_back(kappa);

  int n = rule.elements_per_unit;
  if (n <= 0) {
    if (!(k > 0)) throw ConfigError("wavenumber must be positive");
    int n0 = alignment_denominator(bps);
    double target = std::pow(k, rule.exponent);
    long mult = static_cast<long>(std::ceil(target / n0 - 1e-12));
    if (mult < 1) mult = 1;
    n = static_cast<int>(mult * n0);
  }

  StructuredMesh m;
  m.L1 = L1;
  m.L2 = L2;
  m.kappa = kappa;
  m.degree = degree;
  m.n = n;
  m.h = 1.0 / n;
  for (double b : bps) to_integer(b, "breakpoint", n);
  m.kappa_cells = to_integer(kappa, "kappa", n);
  m.ne_x = to_integer(L1, "L1", n) + 2 * m.kappa_cells;
  m.ne_y = to_integer(L2, "L2", n) + 2 * m.kappa_cells;
  if (m.ne_x < 2 || m.ne_y < 2) throw GeometryError("degenerate domain: fewer than 2 elements per direction");
  m.nx = degree * m.ne_x + 1;
  m.ny = degree * m.ne_y + 1;
  return m;
}

}  // namespace helmdd
