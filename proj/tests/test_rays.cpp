#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "helmdd/errors.hpp"
#include "helmdd/rays.hpp"
#include "oracles/word_bank.hpp"

using namespace helmdd;
using doctest::Approx;

namespace {

const double kD = 1.0 / 40;

PhasePoint at_end(const Trajectory& t) { return t.samples.back(); }

// All words over J letters, no immediate repeats, length <= L.
void all_words(int J, int L, const std::function<void(const Word&)>& visit) {
  Word w;
  std::function<void()> rec = [&] {
    if (!w.empty()) visit(w);
    if (static_cast<int>(w.size()) == L) return;
    for (int j = 0; j < J; ++j) {
      if (!w.empty() && w.back() == j) continue;
      w.push_back(j);
      rec();
      w.pop_back();
    }
  };
  rec();
}

bool is_subword(const Word& sub, const Word& w) {
  if (sub.size() > w.size()) return false;
  for (std::size_t s = 0; s + sub.size() <= w.size(); ++s)
    if (std::equal(sub.begin(), sub.end(), w.begin() + s)) return true;
  return false;
}

}  // namespace

TEST_CASE("constant speed flow is a straight line") {
  PhasePoint z;
  z.x = Point(0, 0);
  z.xi = Eigen::Vector2d(1, 0);
  Trajectory t = flow(z, 0.5, WaveSpeedField{}, 0.01);
  CHECK(at_end(t).x.x() == Approx(1.0).epsilon(1e-15));
  CHECK(at_end(t).x.y() == 0.0);
  CHECK(at_end(t).xi == Eigen::Vector2d(1, 0));
  CHECK(t.t.back() == Approx(0.5));
  CHECK(t.samples.size() == t.t.size());
  CHECK(hamiltonian(z, WaveSpeedField{}) == 0.0);
}

TEST_CASE("flow is time reversible") {
  for (int which : {1, 2, 3}) {
    WaveSpeedField c = wave_speed_case(which);
    PhasePoint z;
    z.x = Point(0.3, 0.45);
    z.xi = Eigen::Vector2d(0.8, 0.5);
    Trajectory fwd = flow(z, 0.4, c, 1e-3);
    PhasePoint back = at_end(fwd);
    back.xi = -back.xi;
    PhasePoint r = at_end(flow(back, 0.4, c, 1e-3));
    CHECK((r.x - z.x).norm() < 1e-8);
    CHECK((r.xi + z.xi).norm() < 1e-8);
  }
}

TEST_CASE("Hamiltonian and angular momentum are conserved in the radial field") {
  WaveSpeedField c = wave_speed_case(2);
  PhasePoint z;
  z.x = Point(0.7, 0.5);
  double s = std::sqrt(c.smooth_inv2(z.x));
  z.xi = Eigen::Vector2d(0.3 * s, std::sqrt(0.91) * s);
  CHECK(std::abs(hamiltonian(z, c)) < 1e-14);
  Trajectory t = flow(z, 0.06, c, 1e-4);
  auto L = [&](const PhasePoint& q) {
    Point d = q.x - c.center;
    return d.x() * q.xi.y() - d.y() * q.xi.x();
  };
  for (const PhasePoint& q : t.samples) {
    REQUIRE((q.x - c.center).norm() < 0.4);
    REQUIRE(std::abs(L(q) - L(z)) < 1e-6);
    REQUIRE(std::abs(hamiltonian(q, c)) <= 1e-6);
  }
}

TEST_CASE("RK4 converges at fourth order") {
  WaveSpeedField c = wave_speed_case(2);
  PhasePoint z;
  z.x = Point(0.7, 0.5);
  z.xi = Eigen::Vector2d(0.2, 1.3);
  const double T = 0.06;
  PhasePoint ref = at_end(flow(z, T, c, T / 1024));
  std::vector<double> err;
  for (int steps : {8, 16, 32}) {
    PhasePoint e = at_end(flow(z, T, c, T / steps));
    err.push_back((e.x - ref.x).norm() + (e.xi - ref.xi).norm());
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    double order = std::log2(err[i - 1] / err[i]);
    INFO("order " << order);
    CHECK(order >= 3.5);
  }
}

TEST_CASE("flow stops when leaving the stop box") {
  PhasePoint z;
  z.x = Point(0.5, 0.5);
  z.xi = Eigen::Vector2d(1, 0);
  Box b{Point(0, 0), Point(1, 1)};
  Trajectory t = flow(z, 5.0, WaveSpeedField{}, 0.01, &b);
  CHECK(t.t.back() < 0.3);
  CHECK_THROWS_AS(flow(z, 1.0, WaveSpeedField{}, 0.0), ConfigError);
}

TEST_CASE("trajectory CSV") {
  PhasePoint z;
  z.xi = Eigen::Vector2d(1, 0);
  Trajectory t = flow(z, 0.1, WaveSpeedField{}, 0.05);
  write_trajectory_csv(t, "traj_test.csv");
  std::ifstream in("traj_test.csv");
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "t,x1,x2,xi1,xi2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(t.samples.size()));
  std::remove("traj_test.csv");
}

TEST_CASE("a horizontal line follows the strip word in its direction only") {
  Decomposition dec = make_strip(2, kD, kD, kD);
  WordGeometry geo = word_geometry(dec, 1.0 / 160);
  PhasePoint z;
  z.x = Point(0.02, 0.5);
  z.xi = Eigen::Vector2d(1, 0);
  Trajectory t = flow(z, 0.49, WaveSpeedField{}, 1e-3);
  CHECK(follows_word(t, {0, 1}, geo).follows);
  CHECK(!follows_word(t, {1, 0}, geo).follows);
  CHECK(follows_word(t, {0}, geo).follows);
  CHECK(!follows_word(t, {0, 1, 0}, geo).follows);

  Trajectory coarse = flow(z, 0.49, WaveSpeedField{}, 0.05);
  FollowResult r = follows_word(coarse, {0, 1}, geo);
  CHECK(r.under_resolved);
}

TEST_CASE("a diagonal ray follows three boxes in a diagonal arrangement") {
  std::vector<Box> boxes{Box{Point(0, 0), Point(0.5, 0.5)}, Box{Point(0.4, 0.4), Point(0.8, 0.8)},
                         Box{Point(0.7, 0.7), Point(1, 1)}};
  Decomposition dec = make_from_boxes(boxes, 0.1, kD, kD);
  WordGeometry geo = word_geometry(dec, 1.0 / 160);
  PhasePoint z;
  z.x = Point(0.1, 0.12);
  z.xi = Eigen::Vector2d(1, 1) / std::sqrt(2.0);
  Trajectory t = flow(z, 0.6, WaveSpeedField{}, 1e-3);
  CHECK(follows_word(t, {0, 1, 2}, geo).follows);
  CHECK(!follows_word(t, {2, 1, 0}, geo).follows);
  CHECK(!follows_word(t, {0, 2}, geo).follows);
}

TEST_CASE("allowed words with constant speed") {
  WaveSpeedField c;
  Decomposition strip = make_strip(3, kD, kD, kD);
  CHECK(!is_allowed({0, 1, 0}, strip, c));
  CHECK(is_allowed({0, 1, 2}, strip, c));
  CHECK(is_allowed({2, 1, 0}, strip, c));
  CHECK(!is_allowed({0, 2}, strip, c));
  CHECK(is_allowed({1}, strip, c));
  Decomposition s4 = make_strip(4, kD, kD, kD);
  CHECK(is_allowed({0, 1, 2, 3}, s4, c));

  Decomposition q = make_checkerboard({2, 2}, kD, kD, kD);
  CHECK(is_allowed({0, 1, 3}, q, c));
  CHECK(is_allowed({0, 3}, q, c));
  CHECK(!is_allowed({0, 1, 2}, q, c));
  CHECK(!is_allowed({0, 1, 0}, q, c));
  CHECK(!is_allowed({1, 0, 2, 3}, q, c));

  CHECK_THROWS_AS(is_allowed({}, strip, c), ConfigError);
  CHECK_THROWS_AS(is_allowed({0, 0}, strip, c), ConfigError);
  CHECK_THROWS_AS(is_allowed({0, 5}, strip, c), ConfigError);
}

TEST_CASE("allowed words are closed under taking sub-words") {
  WaveSpeedField c;
  Decomposition q = make_checkerboard({2, 2}, kD, kD, kD);
  RayOptions opts;
  opts.monotone_filter = false;
  std::vector<Word> allowed, rejected;
  all_words(4, 4, [&](const Word& w) { (is_allowed(w, q, c, opts) ? allowed : rejected).push_back(w); });
  CHECK(!allowed.empty());
  for (const Word& w : allowed) {
    if (w.size() == 4) CHECK(false);
    for (const Word& r : rejected) {
      INFO("allowed word contains a rejected sub-word");
      CHECK(!is_subword(r, w));
    }
  }
  // The filtered and unfiltered searches agree.
  for (const Word& w : allowed) CHECK(is_allowed(w, q, c));
  for (const Word& w : rejected) CHECK(!is_allowed(w, q, c));
}

TEST_CASE("capital N for constant speed") {
  WaveSpeedField c;
  for (int N = 1; N <= 5; ++N) {
    CapitalN r = compute_capital_N(make_strip(N, kD, kD, kD), c);
    CHECK(r.value == N);
    CHECK(r.method == "formula");
    CHECK(!r.lower_bound);
  }
  CHECK(compute_capital_N(make_checkerboard({4, 5}, kD, kD, kD), c).value == 8);

  Decomposition q = make_checkerboard({2, 2}, kD, kD, kD);
  CapitalN e = compute_capital_N(q, c, {}, true);
  CHECK(e.method == "enumeration");
  CHECK(e.value == 3);
  CHECK(e.words_checked > 0);
  CHECK(compute_capital_N(make_strip(3, kD, kD, kD), c, {}, true).value == 3);

  // Independent bank of straight lines between boundary points.
  Box box = q.domain();
  CHECK(longest_word_over_lines(q, box, 12, 1.0 / 400, 1.0 / 160) == 3);
  Decomposition s3 = make_strip(3, kD, kD, kD);
  CHECK(longest_word_over_lines(s3, s3.domain(), 8, 1.0 / 400, 1.0 / 160) == 3);
}

TEST_CASE("word enumeration respects its budget") {
  RayOptions opts;
  opts.word_budget = 5;
  CHECK_THROWS_AS(compute_capital_N(make_checkerboard({2, 2}, kD, kD, kD), WaveSpeedField{}, opts, true),
                  BudgetError);
}

TEST_CASE("variable speed gives a sampled lower bound") {
  RayOptions opts;
  opts.seed_positions = 6;
  opts.seed_directions = 16;
  CapitalN r = compute_capital_N(make_strip(2, kD, kD, kD), wave_speed_case(2), opts);
  CHECK(r.lower_bound);
  CHECK(r.method == "sampled");
  CHECK(r.value >= 2);
  CHECK(r.value <= 3);
}
