#pragma once

#include <string>

#include <Eigen/Dense>

#include "helmdd/media.hpp"
#include "helmdd/types.hpp"

namespace helmdd {

// f_s: vanishes for x <= 0, increasing for x > 0.
struct ScalingProfile {
  enum class Kind { cubic, smooth_linear_tail };

  Kind kind = Kind::cubic;
  double alpha = 5000.0;  // cubic: f = alpha x^3 / 3
  double kappa = 1.0 / 40;
  double kappa_lin = 0.0;  // smooth_linear_tail: f'' = 0 beyond this point
  double slope = 0.0;      // smooth_linear_tail: f' for x >= kappa_lin

  static ScalingProfile cubic(double alpha = 5000.0, double kappa = 1.0 / 40);
  // Defaults: kappa_lin = kappa/2, slope chosen so f(kappa) equals the cubic alpha = 5000 value.
  static ScalingProfile smooth_linear_tail(double kappa, double kappa_lin = -1.0, double slope = -1.0);
};

struct ScalingValue {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

ScalingValue eval_scaling(const ScalingProfile& profile, double x);

// g_{l,j}: zero on the interior box, f_s of the signed distance outside it.
// With interior = Omega_int this is the global g_l.
struct SubdomainScaling {
  ScalingProfile profile;
  Box interior;

  ScalingValue g(int dir, double t) const;
};

// V_j = amplitude * max_l ramp(depth_l / width_l), ramp(s) = min(1, s / (1 - plateau))^order.
struct CapProfile {
  double amplitude = 1.0;
  int order = 2;
  double plateau = 0.25;
  Box interior;
  Box outer;

  static CapProfile make(double amplitude, int order, const Box& interior, const Box& outer,
                         double plateau = 0.25);
};

double cap_potential(const CapProfile& cap, const Point& x);

// Pointwise coefficients of a(u,v) = int k^-2 ((D grad u).grad v* - (beta.grad u) v*) - mass u v*.
struct PointCoefficients {
  Eigen::Matrix2cd D;
  Eigen::Vector2cd beta;
  Complex mass;
};

PointCoefficients pml_coefficients(const SubdomainScaling& scaling, const DiffusionField& A,
                                   const WaveSpeedField& c, const Point& x);

enum class AbsorberKind { pml_cubic, pml_smooth, cap };

struct AbsorberSpec {
  AbsorberKind kind = AbsorberKind::pml_cubic;
  double alpha = 5000.0;    // pml_smooth: slope chosen so f(kappa) matches the cubic with this alpha
  double kappa_lin = 0.0;  // 0 selects kappa/2
  double cap_amplitude = 1.0;
  int cap_order = 2;
};

AbsorberKind parse_absorber(const std::string& name);
std::string to_string(AbsorberKind kind);

// The operator on one PML-extended box (a subdomain, or Omega itself).
struct LocalOperator {
  AbsorberSpec spec;
  SubdomainScaling scaling;
  CapProfile cap;
  DiffusionField A;
  WaveSpeedField c;

  PointCoefficients at(const Point& x) const;
  // |g_l'| at x, zero for CAP; used for the quadrature resolution heuristic.
  double scaling_derivative(int dir, double t) const;
};

LocalOperator make_operator(const AbsorberSpec& spec, double kappa, const Box& interior,
                            const Box& outer, const DiffusionField& A, const WaveSpeedField& c);

}  // namespace helmdd
