#include "helmdd/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helmdd/errors.hpp"

namespace helmdd {

namespace {

constexpr double kTol = 1e-12;

void check_common(double delta, double kappa, double kappa0, double L1, double L2) {
  if (!(delta > 0)) throw ConfigError("overlap must be positive");
  if (!(kappa > 0) || !(kappa0 > 0)) throw ConfigError("PML widths must be positive");
  if (!(L1 > 0) || !(L2 > 0)) throw ConfigError("interior lengths must be positive");
}

void finish_subdomain(Subdomain& s, double kappa, double kappa0) {
  for (int d = 0; d < 2; ++d) {
    s.outer.lo[d] = s.interior.lo[d] - (s.on_boundary_side(d, false) ? kappa : kappa0);
    s.outer.hi[d] = s.interior.hi[d] + (s.on_boundary_side(d, true) ? kappa : kappa0);
  }
}

}  // namespace

Decomposition make_checkerboard(std::array<int, 2> dims, double delta, double kappa, double kappa0,
                                double L1, double L2) {
  check_common(delta, kappa, kappa0, L1, L2);
  if (dims[0] < 1 || dims[1] < 1) throw ConfigError("checkerboard dimensions must be positive");
  Decomposition dec;
  dec.dims = dims;
  dec.delta = delta;
  dec.kappa = kappa;
  dec.kappa0 = kappa0;
  dec.L1 = L1;
  dec.L2 = L2;
  const std::array<double, 2> L{L1, L2};
  for (int d = 0; d < 2; ++d) {
    if (dims[d] == 1) continue;
    double H = L[d] / dims[d];
    if (delta >= H) {
      std::ostringstream msg;
      msg << "overlap too large: delta = " << delta << " >= cell width " << H;
      throw GeometryError(msg.str());
    }
    if (0.5 * delta + kappa0 >= H)
      throw GeometryError("overlap plus interface PML width reaches beyond the adjacent cell");
  }
  for (int cy = 1; cy <= dims[1]; ++cy) {
    for (int cx = 1; cx <= dims[0]; ++cx) {
      Subdomain s;
      s.id = dec.index_of(cx, cy);
      s.coord = {cx, cy};
      std::array<int, 2> c{cx, cy};
      for (int d = 0; d < 2; ++d) {
        int n = dims[d], m = c[d];
        double H = L[d] / n;
        bool lo_b = m == 1, hi_b = m == n;
        s.on_boundary[2 * d] = lo_b;
        s.on_boundary[2 * d + 1] = hi_b;
        s.interior.lo[d] = lo_b ? 0.0 : (m - 1) * H - 0.5 * delta;
        s.interior.hi[d] = hi_b ? L[d] : m * H + 0.5 * delta;
      }
      finish_subdomain(s, kappa, kappa0);
      dec.subdomains.push_back(s);
    }
  }
  return dec;
}

Decomposition make_strip(int N, double delta, double kappa, double kappa0, double L1, double L2) {
  if (N < 1) throw ConfigError("strip needs at least one subdomain");
  return make_checkerboard({N, 1}, delta, kappa, kappa0, L1, L2);
}

Decomposition make_from_boxes(const std::vector<Box>& interiors, double delta, double kappa,
                              double kappa0, double L1, double L2) {
  check_common(delta, kappa, kappa0, L1, L2);
  if (interiors.empty()) throw ConfigError("decomposition needs at least one box");
  Decomposition dec;
  dec.dims = {static_cast<int>(interiors.size()), 1};
  dec.delta = delta;
  dec.kappa = kappa;
  dec.kappa0 = kappa0;
  dec.L1 = L1;
  dec.L2 = L2;
  dec.checkerboard = false;
  const std::array<double, 2> L{L1, L2};
  for (std::size_t j = 0; j < interiors.size(); ++j) {
    const Box& b = interiors[j];
    if (b.empty()) throw GeometryError("empty subdomain box");
    Subdomain s;
    s.id = static_cast<int>(j);
    s.coord = {static_cast<int>(j) + 1, 1};
    s.interior = b;
    for (int d = 0; d < 2; ++d) {
      if (b.lo[d] < -kTol || b.hi[d] > L[d] + kTol) throw GeometryError("subdomain box leaves the interior domain");
      s.on_boundary[2 * d] = std::abs(b.lo[d]) <= kTol;
      s.on_boundary[2 * d + 1] = std::abs(b.hi[d] - L[d]) <= kTol;
    }
    finish_subdomain(s, kappa, kappa0);
    dec.subdomains.push_back(s);
  }
  return dec;
}

std::vector<double> Decomposition::breakpoints() const {
  std::vector<double> out{L1, L2, kappa, kappa0};
  for (const Subdomain& s : subdomains) {
    for (int d = 0; d < 2; ++d) {
      out.push_back(s.interior.lo[d]);
      out.push_back(s.interior.hi[d]);
      out.push_back(s.outer.lo[d]);
      out.push_back(s.outer.hi[d]);
    }
  }
  return out;
}

bool Decomposition::in_mismatch(int j, const Point& x) const {
  const Subdomain& s = subdomains.at(j);
  for (int d = 0; d < 2; ++d) {
    if (!s.on_boundary_side(d, false) && x[d] <= s.interior.lo[d]) return true;
    if (!s.on_boundary_side(d, true) && x[d] >= s.interior.hi[d]) return true;
  }
  return false;
}

namespace {

Box shrunk_support(const Decomposition& dec, int j, double shrink) {
  const Subdomain& s = dec.subdomains.at(j);
  Box dom = dec.domain();
  Box b;
  for (int d = 0; d < 2; ++d) {
    b.lo[d] = s.on_boundary_side(d, false) ? dom.lo[d] : s.interior.lo[d] + shrink * dec.delta;
    b.hi[d] = s.on_boundary_side(d, true) ? dom.hi[d] : s.interior.hi[d] - shrink * dec.delta;
  }
  return b;
}

}  // namespace

Box Decomposition::chi_support(int j) const { return shrunk_support(*this, j, bump_shrink); }

Box Decomposition::cutoff_support(int j) const { return shrunk_support(*this, j, bump_shrink / 3.0); }

std::vector<RegionTag> region_tags(const StructuredMesh& mesh, const Decomposition& dec) {
  if (dec.size() > 64) throw ConfigError("region tags support at most 64 subdomains");
  std::vector<RegionTag> tags(mesh.n_elements());
  for (int ey = 0; ey < mesh.ne_y; ++ey) {
    for (int ex = 0; ex < mesh.ne_x; ++ex) {
      RegionTag& t = tags[ey * mesh.ne_x + ex];
      t.kind = mesh.element_kind(ex, ey);
      Point c(mesh.x(mesh.degree * ex) + 0.5 * mesh.h, mesh.y(mesh.degree * ey) + 0.5 * mesh.h);
      for (int j = 0; j < dec.size(); ++j)
        if (dec.subdomains[j].outer.contains_strictly(c)) t.membership |= std::uint64_t{1} << j;
    }
  }
  return tags;
}

SubdomainNodes subdomain_nodes(const StructuredMesh& mesh, const Box& outer) {
  SubdomainNodes s;
  s.ix0 = mesh.node_line_x(outer.lo.x());
  s.iy0 = mesh.node_line_y(outer.lo.y());
  s.nx = mesh.node_line_x(outer.hi.x()) - s.ix0 + 1;
  s.ny = mesh.node_line_y(outer.hi.y()) - s.iy0 + 1;
  s.global.resize(static_cast<std::size_t>(s.nx) * s.ny);
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) s.global[j * s.nx + i] = mesh.index(s.ix0 + i, s.iy0 + j);
  return s;
}

double bump_1d(double x, double a, double b, bool lo_on_boundary, bool hi_on_boundary,
               double delta, double shrink) {
  double lo = a + shrink * delta;
  double hi = b - shrink * delta;
  double w = b - a;
  if (lo_on_boundary && hi_on_boundary) return 1.0;
  if (lo_on_boundary) return x < hi ? std::exp(-w / (2.0 * (hi - x))) : 0.0;
  if (hi_on_boundary) return x > lo ? std::exp(-w / (2.0 * (x - lo))) : 0.0;
  if (x <= lo || x >= hi) return 0.0;
  return std::exp(-w * w / (4.0 * (x - lo) * (hi - x)));
}

PartitionOfUnity build_pou(const Decomposition& dec, const StructuredMesh& mesh) {
  const int J = dec.size();
  const int n = mesh.n_nodes();
  std::vector<std::vector<double>> bx(J), by(J);
  for (int j = 0; j < J; ++j) {
    const Subdomain& s = dec.subdomains[j];
    for (int d = 0; d < 2; ++d) {
      bool lo_b = s.on_boundary_side(d, false), hi_b = s.on_boundary_side(d, true);
      if (!lo_b && !hi_b &&
          s.interior.lo[d] + dec.bump_shrink * dec.delta >= s.interior.hi[d] - dec.bump_shrink * dec.delta)
        throw GeometryError("empty partition-of-unity support for subdomain " + std::to_string(j));
      int count = d == 0 ? mesh.nx : mesh.ny;
      auto& v = d == 0 ? bx[j] : by[j];
      v.resize(count);
      for (int i = 0; i < count; ++i)
        v[i] = bump_1d(d == 0 ? mesh.x(i) : mesh.y(i), s.interior.lo[d], s.interior.hi[d], lo_b, hi_b,
                       dec.delta, dec.bump_shrink);
    }
  }

  PartitionOfUnity pou;
  pou.chi.assign(J, RVector::Zero(n));
  RVector sum = RVector::Zero(n);
  for (int j = 0; j < J; ++j) {
    for (int node = 0; node < n; ++node) {
      double v = bx[j][mesh.ix(node)] * by[j][mesh.iy(node)];
      pou.chi[j][node] = v;
      sum[node] += v;
    }
  }
  for (int node = 0; node < n; ++node) {
    if (!(sum[node] > 0)) {
      Point p = mesh.coord(node);
      std::ostringstream msg;
      msg << "partition of unity undefined at (" << p.x() << ", " << p.y() << ")";
      throw GeometryError(msg.str());
    }
  }
  for (int j = 0; j < J; ++j) pou.chi[j].array() /= sum.array();

  // Enlarged cutoffs: dilate the positive set by one and two element rings, clipped to Omega_j
  // and kept off the mismatch region.
  pou.chi_gt.assign(J, RVector::Zero(n));
  pou.chi_tilde.assign(J, RVector::Zero(n));
  const int ring = mesh.degree;
  for (int j = 0; j < J; ++j) {
    SubdomainNodes sn = subdomain_nodes(mesh, dec.subdomains[j].outer);
    int i0 = mesh.nx, i1 = -1, j0 = mesh.ny, j1 = -1;
    for (int node = 0; node < n; ++node) {
      if (pou.chi[j][node] > 0) {
        i0 = std::min(i0, mesh.ix(node));
        i1 = std::max(i1, mesh.ix(node));
        j0 = std::min(j0, mesh.iy(node));
        j1 = std::max(j1, mesh.iy(node));
      }
    }
    for (int l = 0; l < sn.size(); ++l) {
      int node = sn.global[l];
      int ix = mesh.ix(node), iy = mesh.iy(node);
      if (dec.in_mismatch(j, mesh.coord(node))) continue;
      auto within = [&](int r) { return ix >= i0 - r && ix <= i1 + r && iy >= j0 - r && iy <= j1 + r; };
      if (within(ring)) pou.chi_gt[j][node] = 1.0;
      if (within(2 * ring)) pou.chi_tilde[j][node] = 1.0;
    }
  }
  return pou;
}

Transfer::Transfer(SubdomainNodes nodes, RVector chi_local, int n_global)
    : nodes_(std::move(nodes)), chi_(std::move(chi_local)), n_global_(n_global) {}

void Transfer::check_local(Eigen::Index n) const {
  if (n != nodes_.size()) throw std::out_of_range("subdomain vector has the wrong length");
}

void Transfer::check_global(Eigen::Index n) const {
  if (n != n_global_) throw std::out_of_range("global vector has the wrong length");
}

std::vector<Transfer> transfer_operators(const Decomposition& dec, const StructuredMesh& mesh,
                                         const PartitionOfUnity& pou) {
  std::vector<Transfer> out;
  out.reserve(dec.size());
  for (int j = 0; j < dec.size(); ++j) {
    SubdomainNodes sn = subdomain_nodes(mesh, dec.subdomains[j].outer);
    RVector chi(sn.size());
    for (int l = 0; l < sn.size(); ++l) chi[l] = pou.chi[j][sn.global[l]];
    out.emplace_back(std::move(sn), std::move(chi), mesh.n_nodes());
  }
  return out;
}

}  // namespace helmdd
