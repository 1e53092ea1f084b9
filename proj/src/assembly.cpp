#include "helmdd/assembly.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "helmdd/bessel.hpp"
#include "helmdd/errors.hpp"

namespace helmdd {

QuadratureRule gauss_legendre_01(int n) {
  if (n < 1) throw ConfigError("quadrature needs at least one point");
  QuadratureRule q;
  q.points.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    q.points[n - 1 - i] = 0.5 * (x + 1.0);
    q.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

double lagrange_1d(int degree, int a, double t) {
  double v = 1.0;
  for (int b = 0; b <= degree; ++b) {
    if (b == a) continue;
    double tb = static_cast<double>(b) / degree;
    double ta = static_cast<double>(a) / degree;
    v *= (t - tb) / (ta - tb);
  }
  return v;
}

double lagrange_1d_derivative(int degree, int a, double t) {
  double ta = static_cast<double>(a) / degree;
  double sum = 0.0;
  for (int c = 0; c <= degree; ++c) {
    if (c == a) continue;
    double tc = static_cast<double>(c) / degree;
    double prod = 1.0 / (ta - tc);
    for (int b = 0; b <= degree; ++b) {
      if (b == a || b == c) continue;
      double tb = static_cast<double>(b) / degree;
      prod *= (t - tb) / (ta - tb);
    }
    sum += prod;
  }
  return sum;
}

namespace {

// Reference basis tabulated at the tensor quadrature points.
struct Tabulation {
  int nq = 0;
  int nb = 0;
  std::vector<double> w;          // per quad point
  std::vector<Point> xi;          // reference coordinates
  std::vector<double> phi;        // [q * nb + a]
  std::vector<Eigen::Vector2d> dphi;  // reference gradients

  Tabulation(int degree, int q1) {
    QuadratureRule r = gauss_legendre_01(q1);
    int n1 = degree + 1;
    nb = n1 * n1;
    nq = q1 * q1;
    for (int qy = 0; qy < q1; ++qy) {
      for (int qx = 0; qx < q1; ++qx) {
        w.push_back(r.weights[qx] * r.weights[qy]);
        xi.emplace_back(r.points[qx], r.points[qy]);
        for (int by = 0; by < n1; ++by) {
          for (int bx = 0; bx < n1; ++bx) {
            double lx = lagrange_1d(degree, bx, r.points[qx]);
            double ly = lagrange_1d(degree, by, r.points[qy]);
            phi.push_back(lx * ly);
            dphi.emplace_back(lagrange_1d_derivative(degree, bx, r.points[qx]) * ly,
                              lx * lagrange_1d_derivative(degree, by, r.points[qy]));
          }
        }
      }
    }
  }
};

}  // namespace

SparseComplexSystem assemble_box(const StructuredMesh& mesh, const SubdomainNodes& nodes,
                                 const LocalOperator& op, double k, const AssemblyOptions& opts) {
  const int p = mesh.degree;
  if (nodes.ix0 % p || nodes.iy0 % p || (nodes.nx - 1) % p || (nodes.ny - 1) % p)
    throw GeometryError("node block is not aligned with element edges");
  const int q1 = opts.quad_points > 0 ? opts.quad_points : p + 2;
  Tabulation tab(p, q1);
  const double h = mesh.h;
  const double k2 = 1.0 / (k * k);
  const int n1 = p + 1;
  const int nloc = nodes.size();

  SparseComplexSystem sys;
  sys.nodes = nodes;
  sys.dirichlet.assign(nloc, 0);
  for (int l = 0; l < nloc; ++l) sys.dirichlet[l] = nodes.is_boundary(l);

  std::vector<Eigen::Triplet<Complex>> trip;
  const int ex0 = nodes.ix0 / p, ey0 = nodes.iy0 / p;
  const int nex = (nodes.nx - 1) / p, ney = (nodes.ny - 1) / p;
  trip.reserve(static_cast<std::size_t>(nex) * ney * tab.nb * tab.nb + nloc);

  Eigen::MatrixXcd ke(tab.nb, tab.nb);
  std::vector<int> dofs(tab.nb);
  for (int ey = 0; ey < ney; ++ey) {
    for (int ex = 0; ex < nex; ++ex) {
      int gex = ex0 + ex, gey = ey0 + ey;
      if (opts.element_filter && !opts.element_filter(gey * mesh.ne_x + gex)) continue;
      Point origin(mesh.x(p * gex), mesh.y(p * gey));
      for (int by = 0; by < n1; ++by)
        for (int bx = 0; bx < n1; ++bx) dofs[by * n1 + bx] = (p * ey + by) * nodes.nx + (p * ex + bx);

      double gmin[2] = {1e300, 1e300}, gmax[2] = {-1e300, -1e300};
      ke.setZero();
      for (int q = 0; q < tab.nq; ++q) {
        Point x = origin + h * tab.xi[q];
        PointCoefficients cf = op.at(x);
        for (int d = 0; d < 2; ++d) {
          double g = op.scaling_derivative(d, x[d]);
          gmin[d] = std::min(gmin[d], g);
          gmax[d] = std::max(gmax[d], g);
        }
        double wq = tab.w[q] * h * h;
        const double* ph = &tab.phi[q * tab.nb];
        const Eigen::Vector2d* dph = &tab.dphi[q * tab.nb];
        for (int c = 0; c < tab.nb; ++c) {
          Eigen::Vector2cd grad_c = (dph[c] / h).cast<Complex>();
          Eigen::Vector2cd dgrad = cf.D * grad_c;
          Complex bgrad = cf.beta.cwiseProduct(grad_c).sum();
          for (int r = 0; r < tab.nb; ++r) {
            Eigen::Vector2d grad_r = dph[r] / h;
            Complex v = k2 * (dgrad[0] * grad_r[0] + dgrad[1] * grad_r[1] - bgrad * ph[r]) -
                        cf.mass * ph[c] * ph[r];
            ke(r, c) += wq * v;
          }
        }
      }
      if (gmax[0] - gmin[0] > opts.underresolved_threshold ||
          gmax[1] - gmin[1] > opts.underresolved_threshold)
        ++sys.underresolved_elements;

      for (int r = 0; r < tab.nb; ++r) {
        if (sys.dirichlet[dofs[r]]) continue;
        for (int c = 0; c < tab.nb; ++c) {
          if (sys.dirichlet[dofs[c]]) continue;
          trip.emplace_back(dofs[r], dofs[c], ke(r, c));
        }
      }
    }
  }
  for (int l = 0; l < nloc; ++l)
    if (sys.dirichlet[l]) trip.emplace_back(l, l, Complex(1.0, 0.0));
  sys.matrix.resize(nloc, nloc);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  return sys;
}

LocalOperator global_operator(const StructuredMesh& mesh, const AbsorberSpec& absorber,
                              const WaveSpeedField& c, const DiffusionField& A) {
  Box interior{Point(0, 0), Point(mesh.L1, mesh.L2)};
  Box outer{Point(-mesh.kappa, -mesh.kappa), Point(mesh.L1 + mesh.kappa, mesh.L2 + mesh.kappa)};
  return make_operator(absorber, mesh.kappa, interior, outer, A, c);
}

LocalOperator local_operator(int j, const Decomposition& dec, const AbsorberSpec& absorber,
                             const WaveSpeedField& c, const DiffusionField& A) {
  const Subdomain& s = dec.subdomains.at(j);
  return make_operator(absorber, dec.kappa, s.interior, s.outer, A, c);
}

SparseComplexSystem assemble_global(const StructuredMesh& mesh, const AbsorberSpec& absorber,
                                    const WaveSpeedField& c, const DiffusionField& A, double k,
                                    const AssemblyOptions& opts) {
  Box outer{Point(-mesh.kappa, -mesh.kappa), Point(mesh.L1 + mesh.kappa, mesh.L2 + mesh.kappa)};
  return assemble_box(mesh, subdomain_nodes(mesh, outer), global_operator(mesh, absorber, c, A), k, opts);
}

SparseComplexSystem assemble_local(int j, const Decomposition& dec, const StructuredMesh& mesh,
                                   const AbsorberSpec& absorber, const WaveSpeedField& c,
                                   const DiffusionField& A, double k, const AssemblyOptions& opts) {
  const Subdomain& s = dec.subdomains.at(j);
  SparseComplexSystem sys =
      assemble_box(mesh, subdomain_nodes(mesh, s.outer), local_operator(j, dec, absorber, c, A), k, opts);
  sys.subdomain = j;
  return sys;
}

CVector assemble_load_fn(const StructuredMesh& mesh, const std::function<Complex(const Point&)>& f,
                         const Box& support, int quad_points) {
  const int p = mesh.degree;
  const int q1 = quad_points > 0 ? quad_points : p + 2;
  Tabulation tab(p, q1);
  const int n1 = p + 1;
  const double h = mesh.h;
  CVector load = CVector::Zero(mesh.n_nodes());
  for (int ey = 0; ey < mesh.ne_y; ++ey) {
    for (int ex = 0; ex < mesh.ne_x; ++ex) {
      Point origin(mesh.x(p * ex), mesh.y(p * ey));
      Point centre = origin + Point(0.5 * h, 0.5 * h);
      if (!support.contains(centre)) continue;
      for (int q = 0; q < tab.nq; ++q) {
        Complex fv = f(origin + h * tab.xi[q]) * (tab.w[q] * h * h);
        for (int by = 0; by < n1; ++by)
          for (int bx = 0; bx < n1; ++bx)
            load[mesh.index(p * ex + bx, p * ey + by)] += fv * tab.phi[q * tab.nb + by * n1 + bx];
      }
    }
  }
  for (int node = 0; node < mesh.n_nodes(); ++node)
    if (mesh.is_boundary(node)) load[node] = 0.0;
  return load;
}

CVector assemble_load(const StructuredMesh& mesh, double k, const Point& x0, bool interior_only) {
  Box support = interior_only ? Box{Point(0, 0), Point(mesh.L1, mesh.L2)}
                              : Box{Point(-mesh.kappa, -mesh.kappa),
                                    Point(mesh.L1 + mesh.kappa, mesh.L2 + mesh.kappa)};
  auto f = [&](const Point& x) { return Complex(bessel_j0(k * (x - x0).norm()), 0.0); };
  return assemble_load_fn(mesh, f, support);
}

double l2_error(const StructuredMesh& mesh, const CVector& uh,
                const std::function<Complex(const Point&)>& exact) {
  const int p = mesh.degree;
  Tabulation tab(p, p + 3);
  const int n1 = p + 1;
  const double h = mesh.h;
  double sum = 0.0;
  for (int ey = 0; ey < mesh.ne_y; ++ey) {
    for (int ex = 0; ex < mesh.ne_x; ++ex) {
      Point origin(mesh.x(p * ex), mesh.y(p * ey));
      for (int q = 0; q < tab.nq; ++q) {
        Complex v = 0.0;
        for (int by = 0; by < n1; ++by)
          for (int bx = 0; bx < n1; ++bx)
            v += uh[mesh.index(p * ex + bx, p * ey + by)] * tab.phi[q * tab.nb + by * n1 + bx];
        sum += std::norm(v - exact(origin + h * tab.xi[q])) * tab.w[q] * h * h;
      }
    }
  }
  return std::sqrt(sum);
}

void write_matrix_market(const CSparse& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < a.outerSize(); ++r)
    for (CSparse::InnerIterator it(a, r); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace helmdd
