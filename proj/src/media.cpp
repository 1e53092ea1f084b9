#include "helmdd/media.hpp"

#include <cmath>

#include "helmdd/errors.hpp"

namespace helmdd {

namespace {

double cone_amplitude(WaveSpeedCase tag) {
  switch (tag) {
    case WaveSpeedCase::case2: return 1.0;
    case WaveSpeedCase::case3: return -0.5;
    default: return 0.0;
  }
}

}  // namespace

// Antiderivative of the degree-9 smoothstep, so the blend is C^5.
double smooth_plus(double t, double w) {
  if (t >= w) return t;
  if (t <= -w) return 0.0;
  double u = (t + w) / (2.0 * w);
  double u2 = u * u, u6 = u2 * u2 * u2;
  return 2.0 * w * u6 * (21.0 + u * (-60.0 + u * (67.5 + u * (-35.0 + 7.0 * u))));
}

double smooth_plus_derivative(double t, double w) {
  if (t >= w) return 1.0;
  if (t <= -w) return 0.0;
  double u = (t + w) / (2.0 * w);
  double u2 = u * u, u5 = u2 * u2 * u;
  return u5 * (126.0 + u * (-420.0 + u * (540.0 + u * (-315.0 + 70.0 * u))));
}

double WaveSpeedField::inv2(const Point& x) const {
  if (tag == WaveSpeedCase::custom) return custom_inv2(x);
  double a = cone_amplitude(tag);
  if (a == 0.0) return 1.0;
  double r = (x - center).norm();
  return 1.0 + a * std::max(0.0, 1.0 - r / radius);
}

double WaveSpeedField::smooth_inv2(const Point& x) const {
  if (tag == WaveSpeedCase::custom) return custom_inv2(x);
  double a = cone_amplitude(tag);
  if (a == 0.0) return 1.0;
  double rs = std::sqrt((x - center).squaredNorm() + blend * blend);
  return 1.0 + a / radius * smooth_plus(radius - rs, blend);
}

Point WaveSpeedField::smooth_grad_inv2(const Point& x) const {
  if (tag == WaveSpeedCase::custom) {
    if (!custom_grad_inv2) throw ConfigError("custom wave speed needs a gradient for ray tracing");
    return custom_grad_inv2(x);
  }
  double a = cone_amplitude(tag);
  if (a == 0.0) return Point::Zero();
  Point d = x - center;
  double rs = std::sqrt(d.squaredNorm() + blend * blend);
  return -a / radius * smooth_plus_derivative(radius - rs, blend) * d / rs;
}

WaveSpeedField wave_speed_case(int which, const Point& center) {
  WaveSpeedField c;
  c.center = center;
  switch (which) {
    case 1: c.tag = WaveSpeedCase::case1; break;
    case 2: c.tag = WaveSpeedCase::case2; break;
    case 3: c.tag = WaveSpeedCase::case3; break;
    default: throw ConfigError("wave speed case must be 1, 2 or 3");
  }
  return c;
}

WaveSpeedCase parse_wave_speed(const std::string& name) {
  if (name == "case1" || name == "1") return WaveSpeedCase::case1;
  if (name == "case2" || name == "2") return WaveSpeedCase::case2;
  if (name == "case3" || name == "3") return WaveSpeedCase::case3;
  throw ConfigError("unknown wave speed '" + name + "'");
}

std::string to_string(WaveSpeedCase c) {
  switch (c) {
    case WaveSpeedCase::case1: return "case1";
    case WaveSpeedCase::case2: return "case2";
    case WaveSpeedCase::case3: return "case3";
    case WaveSpeedCase::custom: return "custom";
  }
  return "?";
}

Eigen::Matrix2d DiffusionField::operator()(const Point& x) const {
  switch (tag) {
    case DiffusionKind::identity: return Eigen::Matrix2d::Identity();
    case DiffusionKind::badA: {
      double r = (x - center).norm();
      double s = (0.4 - r) + std::abs(0.4 - r);
      Eigen::Matrix2d a;
      a << 1.0, s, s, 1.0;
      return a;
    }
    case DiffusionKind::custom: return custom(x);
  }
  return Eigen::Matrix2d::Identity();
}

DiffusionField diffusion_identity() { return {}; }

DiffusionField diffusion_badA(const Point& center) {
  DiffusionField a;
  a.tag = DiffusionKind::badA;
  a.center = center;
  return a;
}

DiffusionKind parse_diffusion(const std::string& name) {
  if (name == "identity") return DiffusionKind::identity;
  if (name == "badA") return DiffusionKind::badA;
  throw ConfigError("unknown diffusion '" + name + "'");
}

std::string to_string(DiffusionKind d) {
  switch (d) {
    case DiffusionKind::identity: return "identity";
    case DiffusionKind::badA: return "badA";
    case DiffusionKind::custom: return "custom";
  }
  return "?";
}

}  // namespace helmdd
