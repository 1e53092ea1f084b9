#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "helmdd/decomposition.hpp"
#include "helmdd/media.hpp"
#include "helmdd/types.hpp"

namespace helmdd {

struct PhasePoint {
  Point x = Point::Zero();
  Eigen::Vector2d xi = Eigen::Vector2d::Zero();
};

struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint> samples;
  double dt = 0.0;
};

// Subdomain indices, consecutive entries distinct (0-based).
using Word = std::vector<int>;

// p(x, xi) = |xi|^2 - c^-2(x), with the mollified slowness.
double hamiltonian(const PhasePoint& z, const WaveSpeedField& c);

// dx/dt = 2 xi, dxi/dt = grad c^-2. Classical RK4 with step halving when the Hamiltonian drifts
// by more than 1e-6 (1 + |p0|); closed form for constant c. Integration stops early once the
// position leaves `stop_box` (when given).
Trajectory flow(const PhasePoint& start, double T, const WaveSpeedField& c, double dt,
                const Box* stop_box = nullptr);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// Boxes used by the word-following test.
struct WordGeometry {
  const Decomposition* dec = nullptr;
  std::vector<Box> cutoff;    // supp of the enlarged cutoff of each subdomain
  std::vector<Box> extended;  // Omega_j enlarged by eps_ext

  bool in_crossing(int from, int to, const Point& x) const;
};

WordGeometry word_geometry(const Decomposition& dec, double eps_ext);

struct FollowResult {
  bool follows = false;
  bool under_resolved = false;  // some crossing region holds, or could hold, fewer than 3 samples
};

FollowResult follows_word(const Trajectory& traj, const Word& w, const WordGeometry& geo);

struct RayOptions {
  double eps_ext = 1.0 / 160;  // one element layer
  int line_grid = 6;           // constant speed: candidate endpoints per direction
  int seed_positions = 32;     // variable speed: seeds per direction on the first region
  int seed_directions = 64;
  double dt = 2e-3;
  double t_max = 2.0;
  bool monotone_filter = true;  // checkerboards with constant speed
  std::size_t word_budget = 200000;
};

bool is_allowed(const Word& w, const Decomposition& dec, const WaveSpeedField& c,
                const RayOptions& opts = {});

struct CapitalN {
  int value = 0;
  bool lower_bound = false;
  std::string method;  // formula, enumeration or sampled
  std::size_t words_checked = 0;
};

CapitalN compute_capital_N(const Decomposition& dec, const WaveSpeedField& c,
                           const RayOptions& opts = {}, bool force_enumeration = false);

}  // namespace helmdd
