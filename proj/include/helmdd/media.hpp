#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "helmdd/types.hpp"

namespace helmdd {

enum class WaveSpeedCase { case1, case2, case3, custom };

// Squared slowness c^-2. Cases 2 and 3 are radial cones of radius 0.4 about `center`:
// case 2 falls from 2 to 1, case 3 rises from 0.5 to 1.
struct WaveSpeedField {
  WaveSpeedCase tag = WaveSpeedCase::case1;
  Point center{0.5, 0.5};
  double radius = 0.4;
  double blend = 0.02;  // mollification width used by ray tracing
  std::function<double(const Point&)> custom_inv2;
  std::function<Point(const Point&)> custom_grad_inv2;

  bool is_constant() const { return tag == WaveSpeedCase::case1; }
  double inv2(const Point& x) const;
  double smooth_inv2(const Point& x) const;
  Point smooth_grad_inv2(const Point& x) const;
};

WaveSpeedField wave_speed_case(int which, const Point& center = Point(0.5, 0.5));
WaveSpeedCase parse_wave_speed(const std::string& name);
std::string to_string(WaveSpeedCase c);

enum class DiffusionKind { identity, badA, custom };

struct DiffusionField {
  DiffusionKind tag = DiffusionKind::identity;
  Point center{0.5, 0.5};
  std::function<Eigen::Matrix2d(const Point&)> custom;

  Eigen::Matrix2d operator()(const Point& x) const;
};

DiffusionField diffusion_identity();
// I + [[0,1],[1,0]] * ((0.4 - r) + |0.4 - r|), r = |x - center|.
DiffusionField diffusion_badA(const Point& center = Point(0.5, 0.5));
DiffusionKind parse_diffusion(const std::string& name);
std::string to_string(DiffusionKind d);

// Smooth approximation of max(t, 0); exact outside |t| < w.
double smooth_plus(double t, double w);
double smooth_plus_derivative(double t, double w);

}  // namespace helmdd
