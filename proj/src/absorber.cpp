#include "helmdd/absorber.hpp"

#include <algorithm>
#include <cmath>

#include "helmdd/errors.hpp"

namespace helmdd {

ScalingProfile ScalingProfile::cubic(double alpha, double kappa) {
  if (!(alpha > 0)) throw ConfigError("cubic PML coefficient must be positive");
  ScalingProfile p;
  p.kind = Kind::cubic;
  p.alpha = alpha;
  p.kappa = kappa;
  return p;
}

ScalingProfile ScalingProfile::smooth_linear_tail(double kappa, double kappa_lin, double slope) {
  if (!(kappa > 0)) throw ConfigError("PML width must be positive");
  if (kappa_lin <= 0) kappa_lin = 0.5 * kappa;
  if (kappa_lin >= kappa) throw ConfigError("kappa_lin must be smaller than the PML width");
  if (slope <= 0) slope = 5000.0 * kappa * kappa * kappa / 3.0 / (kappa - 0.5 * kappa_lin);
  ScalingProfile p;
  p.kind = Kind::smooth_linear_tail;
  p.kappa = kappa;
  p.kappa_lin = kappa_lin;
  p.slope = slope;
  return p;
}

ScalingValue eval_scaling(const ScalingProfile& profile, double x) {
  if (x <= 0) return {};
  if (profile.kind == ScalingProfile::Kind::cubic) {
    double a = profile.alpha;
    return {a * x * x * x / 3.0, a * x * x, 2.0 * a * x};
  }
  double s = profile.slope;
  double kl = profile.kappa_lin;
  if (x >= kl) return {s * kl * 0.5 + s * (x - kl), s, 0.0};
  double t = x / kl;
  return {s * kl * (t * t * t - 0.5 * t * t * t * t), s * (3.0 * t * t - 2.0 * t * t * t),
          s * (6.0 * t - 6.0 * t * t) / kl};
}

ScalingValue SubdomainScaling::g(int dir, double t) const {
  double a = interior.lo[dir];
  double b = interior.hi[dir];
  if (t > b) return eval_scaling(profile, t - b);
  if (t < a) {
    ScalingValue v = eval_scaling(profile, a - t);
    return {-v.f, v.df, -v.d2f};
  }
  return {};
}

CapProfile CapProfile::make(double amplitude, int order, const Box& interior, const Box& outer,
                            double plateau) {
  if (amplitude < 0) throw ConfigError("CAP amplitude must be nonnegative");
  if (order < 1) throw ConfigError("CAP ramp order must be at least 1");
  if (!(plateau >= 0 && plateau < 1)) throw ConfigError("CAP plateau must lie in [0, 1)");
  CapProfile c;
  c.amplitude = amplitude;
  c.order = order;
  c.plateau = plateau;
  c.interior = interior;
  c.outer = outer;
  return c;
}

double cap_potential(const CapProfile& cap, const Point& x) {
  double s = 0.0;
  for (int d = 0; d < 2; ++d) {
    double lo_w = cap.interior.lo[d] - cap.outer.lo[d];
    double hi_w = cap.outer.hi[d] - cap.interior.hi[d];
    if (x[d] < cap.interior.lo[d] && lo_w > 0) s = std::max(s, (cap.interior.lo[d] - x[d]) / lo_w);
    if (x[d] > cap.interior.hi[d] && hi_w > 0) s = std::max(s, (x[d] - cap.interior.hi[d]) / hi_w);
  }
  if (s <= 0) return 0.0;
  double r = std::min(1.0, s / (1.0 - cap.plateau));
  return cap.amplitude * std::pow(r, cap.order);
}

namespace {

void check_spd(const Eigen::Matrix2d& a) {
  double scale = a.cwiseAbs().maxCoeff();
  if (std::abs(a(0, 1) - a(1, 0)) > 1e-12 * scale || a(0, 0) <= 0 || a.determinant() <= 0)
    throw NumericalError("diffusion coefficient is not symmetric positive definite");
}

}  // namespace

PointCoefficients pml_coefficients(const SubdomainScaling& scaling, const DiffusionField& A,
                                   const WaveSpeedField& c, const Point& x) {
  Eigen::Matrix2d a = A(x);
  check_spd(a);
  Eigen::Vector2cd inv_gamma, ratio;
  for (int d = 0; d < 2; ++d) {
    ScalingValue g = scaling.g(d, x[d]);
    Complex gamma(1.0, g.df);
    Complex dgamma(0.0, g.d2f);
    inv_gamma[d] = 1.0 / gamma;
    ratio[d] = dgamma / (gamma * gamma);
  }
  PointCoefficients out;
  out.D = inv_gamma.asDiagonal() * a.cast<Complex>() * inv_gamma.asDiagonal();
  out.beta = inv_gamma.asDiagonal() * (a.cast<Complex>() * ratio);
  out.mass = c.inv2(x);
  return out;
}

AbsorberKind parse_absorber(const std::string& name) {
  if (name == "pml_cubic") return AbsorberKind::pml_cubic;
  if (name == "pml_smooth") return AbsorberKind::pml_smooth;
  if (name == "cap") return AbsorberKind::cap;
  throw ConfigError("unknown absorber '" + name + "'");
}

std::string to_string(AbsorberKind kind) {
  switch (kind) {
    case AbsorberKind::pml_cubic: return "pml_cubic";
    case AbsorberKind::pml_smooth: return "pml_smooth";
    case AbsorberKind::cap: return "cap";
  }
  return "?";
}

PointCoefficients LocalOperator::at(const Point& x) const {
  if (spec.kind != AbsorberKind::cap) return pml_coefficients(scaling, A, c, x);
  Eigen::Matrix2d a = A(x);
  check_spd(a);
  PointCoefficients out;
  out.D = a.cast<Complex>();
  out.beta.setZero();
  out.mass = Complex(c.inv2(x), cap_potential(cap, x));
  return out;
}

double LocalOperator::scaling_derivative(int dir, double t) const {
  if (spec.kind == AbsorberKind::cap) return 0.0;
  return scaling.g(dir, t).df;
}

LocalOperator make_operator(const AbsorberSpec& spec, double kappa, const Box& interior,
                            const Box& outer, const DiffusionField& A, const WaveSpeedField& c) {
  LocalOperator op;
  op.spec = spec;
  op.A = A;
  op.c = c;
  op.scaling.interior = interior;
  switch (spec.kind) {
    case AbsorberKind::pml_cubic:
      op.scaling.profile = ScalingProfile::cubic(spec.alpha, kappa);
      break;
    case AbsorberKind::pml_smooth:
    {
      double kl = spec.kappa_lin > 0 ? spec.kappa_lin : 0.5 * kappa;
      double slope = spec.alpha * kappa * kappa * kappa / 3.0 / (kappa - 0.5 * kl);
      op.scaling.profile = ScalingProfile::smooth_linear_tail(kappa, kl, slope);
    }
      break;
    case AbsorberKind::cap:
      op.cap = CapProfile::make(spec.cap_amplitude, spec.cap_order, interior, outer);
      break;
  }
  return op;
}

}  // namespace helmdd
