#include "helmdd/rays.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "helmdd/errors.hpp"

namespace helmdd {

double hamiltonian(const PhasePoint& z, const WaveSpeedField& c) {
  return z.xi.squaredNorm() - c.smooth_inv2(z.x);
}

namespace {

PhasePoint rhs(const PhasePoint& z, const WaveSpeedField& c) {
  return {2.0 * z.xi, c.smooth_grad_inv2(z.x)};
}

PhasePoint axpy(const PhasePoint& z, double a, const PhasePoint& k) {
  return {z.x + a * k.x, z.xi + a * k.xi};
}

PhasePoint rk4(const PhasePoint& z, double h, const WaveSpeedField& c) {
  PhasePoint k1 = rhs(z, c);
  PhasePoint k2 = rhs(axpy(z, 0.5 * h, k1), c);
  PhasePoint k3 = rhs(axpy(z, 0.5 * h, k2), c);
  PhasePoint k4 = rhs(axpy(z, h, k3), c);
  return {z.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          z.xi + h / 6.0 * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi)};
}

PhasePoint checked_step(const PhasePoint& z, double h, const WaveSpeedField& c, double p0, double tol,
                        int depth) {
  PhasePoint next = rk4(z, h, c);
  if (std::abs(hamiltonian(next, c) - p0) <= tol) return next;
  if (depth >= 16) throw NumericalError("ray integration: Hamiltonian drift exceeds tolerance");
  PhasePoint half = checked_step(z, 0.5 * h, c, p0, tol, depth + 1);
  return checked_step(half, 0.5 * h, c, p0, tol, depth + 1);
}

}  // namespace

Trajectory flow(const PhasePoint& start, double T, const WaveSpeedField& c, double dt,
                const Box* stop_box) {
  if (!(dt > 0)) throw ConfigError("ray time step must be positive");
  if (!(T >= 0)) throw ConfigError("ray duration must be nonnegative");
  Trajectory tr;
  tr.dt = dt;
  tr.t.push_back(0.0);
  tr.samples.push_back(start);
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
  const double p0 = hamiltonian(start, c);
  const double tol = 1e-6 * (1.0 + std::abs(p0));
  PhasePoint z = start;
  double t = 0.0;
  for (long s = 0; s < steps; ++s) {
    double h = std::min(dt, T - t);
    double tn = (s + 1 == steps) ? T : t + h;
    if (c.is_constant()) {
      z.x = start.x + 2.0 * tn * start.xi;
      z.xi = start.xi;
    } else {
      z = checked_step(z, h, c, p0, tol, 0);
    }
    t = tn;
    tr.t.push_back(t);
    tr.samples.push_back(z);
    if (stop_box && !stop_box->contains(z.x)) break;
  }
  return tr;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "t,x1,x2,xi1,xi2\n" << std::setprecision(12);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const PhasePoint& z = traj.samples[i];
    out << traj.t[i] << ',' << z.x.x() << ',' << z.x.y() << ',' << z.xi.x() << ',' << z.xi.y() << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

bool WordGeometry::in_crossing(int from, int to, const Point& x) const {
  return cutoff[from].contains(x) && dec->subdomains[to].outer.contains(x) && dec->in_mismatch(to, x);
}

WordGeometry word_geometry(const Decomposition& dec, double eps_ext) {
  WordGeometry g;
  g.dec = &dec;
  for (int j = 0; j < dec.size(); ++j) {
    g.cutoff.push_back(dec.cutoff_support(j));
    g.extended.push_back(dec.subdomains[j].outer.inflated(eps_ext));
  }
  return g;
}

namespace {

// reach[i]: the word prefix up to region i has been matched and the trajectory has stayed
// inside the extended subdomain w[i+1] since.
FollowResult follows_points(const std::vector<Point>& pts, const Word& w, const WordGeometry& geo) {
  FollowResult res;
  const int n = static_cast<int>(w.size());
  if (n == 0) return res;
  auto in_region = [&](int i, const Point& x) {
    return i + 1 < n ? geo.in_crossing(w[i], w[i + 1], x) : geo.cutoff[w[i]].contains(x);
  };
  std::vector<char> reach(n, 0), next(n, 0);
  std::vector<int> hits(n, 0);
  for (const Point& x : pts) {
    for (int i = 0; i < n; ++i) hits[i] += in_region(i, x);
    std::fill(next.begin(), next.end(), 0);
    for (int i = 0; i + 1 < n; ++i) {
      if (!reach[i] || !geo.extended[w[i + 1]].contains(x)) continue;
      next[i] = 1;
      if (in_region(i + 1, x)) next[i + 1] = 1;
    }
    if (in_region(0, x)) next[0] = 1;
    reach.swap(next);
    if (reach[n - 1]) {
      res.follows = true;
      break;
    }
  }
  if (res.follows) {
    for (int i = 0; i < n; ++i)
      if (hits[i] < 3) res.under_resolved = true;
  }
  // Sample spacing against the thinnest crossing region of the word.
  double step = 0.0;
  for (std::size_t s = 1; s < pts.size(); ++s) step = std::max(step, (pts[s] - pts[s - 1]).norm());
  for (int i = 0; i + 1 < n; ++i) {
    Box b = intersect(geo.cutoff[w[i]], geo.dec->subdomains[w[i + 1]].outer);
    double width = std::min({b.hi.x() - b.lo.x(), b.hi.y() - b.lo.y(), geo.dec->kappa0});
    if (width > 0 && 3 * step > width) res.under_resolved = true;
  }
  return res;
}

std::vector<Point> positions(const Trajectory& traj) {
  std::vector<Point> pts;
  pts.reserve(traj.samples.size());
  for (const PhasePoint& z : traj.samples) pts.push_back(z.x);
  return pts;
}

void validate_word(const Word& w, const Decomposition& dec) {
  if (w.empty()) throw ConfigError("word must be nonempty");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0 || w[i] >= dec.size()) throw ConfigError("word letter out of range");
    if (i > 0 && w[i] == w[i - 1]) throw ConfigError("word repeats a letter consecutively");
  }
}

bool consecutive_overlap(const Word& w, const Decomposition& dec) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (intersect(dec.subdomains[w[i - 1]].outer, dec.subdomains[w[i]].outer).empty()) return false;
  return true;
}

bool monotone_coordinates(const Word& w, const Decomposition& dec) {
  for (int d = 0; d < 2; ++d) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < w.size(); ++i) {
      int a = dec.subdomains[w[i - 1]].coord[d], b = dec.subdomains[w[i]].coord[d];
      if (b < a) up = false;
      if (b > a) down = false;
    }
    if (!up && !down) return false;
  }
  return true;
}

template <typename Pred>
std::vector<Point> grid_points(const Box& box, int n, Pred keep) {
  std::vector<Point> out;
  if (box.empty()) return out;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Point p(box.lo.x() + (a + 0.5) / n * (box.hi.x() - box.lo.x()),
              box.lo.y() + (b + 0.5) / n * (box.hi.y() - box.lo.y()));
      if (keep(p)) out.push_back(p);
    }
  }
  return out;
}

// Straight line through A and B clipped to `dom`, sampled with spacing ds.
std::vector<Point> sampled_line(const Point& A, const Point& B, const Box& dom, double ds) {
  Eigen::Vector2d d = B - A;
  double len = d.norm();
  if (len == 0) return {A};
  d /= len;
  double t0 = -1e300, t1 = 1e300;
  for (int k = 0; k < 2; ++k) {
    if (std::abs(d[k]) < 1e-15) continue;
    double ta = (dom.lo[k] - A[k]) / d[k], tb = (dom.hi[k] - A[k]) / d[k];
    t0 = std::max(t0, std::min(ta, tb));
    t1 = std::min(t1, std::max(ta, tb));
  }
  std::vector<Point> pts;
  if (!(t1 > t0)) return pts;
  long m = static_cast<long>(std::ceil((t1 - t0) / ds));
  pts.reserve(m + 1);
  for (long i = 0; i <= m; ++i) pts.push_back(A + (t0 + (t1 - t0) * i / m) * d);
  return pts;
}

double sample_spacing(const Decomposition& dec, const RayOptions& opts) {
  return std::min({opts.eps_ext, 0.1 * dec.delta, dec.kappa0}) / 4.0;
}

bool allowed_straight(const Word& w, const Decomposition& dec, const WordGeometry& geo,
                      const RayOptions& opts) {
  const int n = static_cast<int>(w.size());
  Box first = intersect(geo.cutoff[w[0]], dec.subdomains[w[1]].outer);
  auto starts = grid_points(first, opts.line_grid, [&](const Point& p) { return geo.in_crossing(w[0], w[1], p); });
  auto ends = grid_points(geo.cutoff[w[n - 1]], opts.line_grid, [](const Point&) { return true; });
  Box dom = dec.domain().inflated(opts.eps_ext);
  double ds = sample_spacing(dec, opts);
  for (const Point& A : starts) {
    for (const Point& B : ends) {
      auto pts = sampled_line(A, B, dom, ds);
      if (follows_points(pts, w, geo).follows) return true;
    }
  }
  return false;
}

std::vector<std::vector<Point>> seed_rays(const Box& region, const std::function<bool(const Point&)>& keep,
                                          const Decomposition& dec, const WaveSpeedField& c,
                                          const RayOptions& opts, int npos, int ndir) {
  std::vector<std::vector<Point>> out;
  Box dom = dec.domain().inflated(opts.eps_ext);
  auto seeds = grid_points(region, npos, keep);
  for (const Point& x0 : seeds) {
    double speed = std::sqrt(c.smooth_inv2(x0));
    for (int a = 0; a < ndir; ++a) {
      double th = 2.0 * std::numbers::pi * a / ndir;
      PhasePoint z{x0, speed * Eigen::Vector2d(std::cos(th), std::sin(th))};
      out.push_back(positions(flow(z, opts.t_max, c, opts.dt, &dom)));
    }
  }
  return out;
}

}  // namespace

FollowResult follows_word(const Trajectory& traj, const Word& w, const WordGeometry& geo) {
  return follows_points(positions(traj), w, geo);
}

bool is_allowed(const Word& w, const Decomposition& dec, const WaveSpeedField& c, const RayOptions& opts) {
  validate_word(w, dec);
  if (w.size() == 1) return true;
  if (!consecutive_overlap(w, dec)) return false;
  WordGeometry geo = word_geometry(dec, opts.eps_ext);
  if (c.is_constant()) {
    if (dec.checkerboard && opts.monotone_filter && !monotone_coordinates(w, dec)) return false;
    return allowed_straight(w, dec, geo, opts);
  }
  Box first = intersect(geo.cutoff[w[0]], dec.subdomains[w[1]].outer);
  auto rays = seed_rays(first, [&](const Point& p) { return geo.in_crossing(w[0], w[1], p); }, dec, c, opts,
                        opts.seed_positions, opts.seed_directions);
  for (const auto& pts : rays)
    if (follows_points(pts, w, geo).follows) return true;
  return false;
}

CapitalN compute_capital_N(const Decomposition& dec, const WaveSpeedField& c, const RayOptions& opts,
                           bool force_enumeration) {
  CapitalN out;
  if (c.is_constant() && dec.checkerboard && !force_enumeration) {
    out.value = 1 + (dec.dims[0] - 1) + (dec.dims[1] - 1);
    out.method = "formula";
    return out;
  }
  const int J = dec.size();
  WordGeometry geo = word_geometry(dec, opts.eps_ext);
  std::vector<std::vector<Point>> bank;
  if (!c.is_constant()) {
    Box interior{Point(0, 0), Point(dec.L1, dec.L2)};
    bank = seed_rays(interior, [](const Point&) { return true; }, dec, c, opts,
                     std::max(1, opts.seed_positions / 2), std::max(1, opts.seed_directions / 2));
    out.lower_bound = true;
    out.method = "sampled";
  } else {
    out.method = "enumeration";
  }
  auto allowed = [&](const Word& w) {
    if (++out.words_checked > opts.word_budget) throw BudgetError("word enumeration exceeded its budget");
    if (!consecutive_overlap(w, dec)) return false;
    if (c.is_constant()) {
      RayOptions o = opts;
      if (force_enumeration) o.monotone_filter = false;
      if (dec.checkerboard && o.monotone_filter && !monotone_coordinates(w, dec)) return false;
      return allowed_straight(w, dec, geo, o);
    }
    for (const auto& pts : bank)
      if (follows_points(pts, w, geo).follows) return true;
    return false;
  };
  std::vector<Word> frontier;
  for (int j = 0; j < J; ++j) frontier.push_back({j});
  out.value = J > 0 ? 1 : 0;
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (int j = 0; j < J; ++j) {
        if (j == w.back()) continue;
        Word e = w;
        e.push_back(j);
        if (allowed(e)) next.push_back(std::move(e));
      }
    }
    if (!next.empty()) out.value = static_cast<int>(next.front().size());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace helmdd
