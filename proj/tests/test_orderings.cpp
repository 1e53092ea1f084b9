#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "helmdd/errors.hpp"
#include "helmdd/orderings.hpp"

using namespace helmdd;

namespace {

using Tableau = std::vector<std::vector<int>>;

bool visits_in_order(const Ordering& o, const std::vector<int>& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (!o.precedes(chain[i - 1], chain[i])) return false;
  return true;
}

// Visit order is a linear extension of the componentwise order seen from the first subdomain's corner.
bool is_monotone(const Ordering& o, std::array<int, 2> dims) {
  int first = o.at(0);
  int sx = first % dims[0] == 0 ? 1 : -1, sy = first / dims[0] == 0 ? 1 : -1;
  const int n = o.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      bool le = sx * (a % dims[0]) <= sx * (b % dims[0]) && sy * (a / dims[0]) <= sy * (b / dims[0]);
      if (a != b && le && !o.precedes(a, b)) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("ordering basics") {
  Ordering o({2, 0, 1});
  CHECK(o.size() == 3);
  CHECK(o.at(0) == 2);
  CHECK(o.position(2) == 0);
  CHECK(o.precedes(2, 1));
  CHECK(!o.precedes(1, 0));
  CHECK(o.reversed().sequence() == std::vector<int>{1, 0, 2});
  CHECK(Ordering::identity(3).sequence() == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(Ordering({0, 0, 1}), ConfigError);
  CHECK_THROWS_AS(Ordering({0, 3, 1}), ConfigError);
  for (int i = 0; i < 3; ++i) CHECK(o.at(o.position(i)) == i);
}

TEST_CASE("lexicographic orderings of a 3 x 3 checkerboard reproduce the figure") {
  std::vector<Tableau> figure{
      {{7, 8, 9}, {4, 5, 6}, {1, 2, 3}},
      {{9, 8, 7}, {6, 5, 4}, {3, 2, 1}},
      {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}},
      {{3, 2, 1}, {6, 5, 4}, {9, 8, 7}},
  };
  auto seq = generate_lexicographic({3, 3});
  REQUIRE(seq.size() == 4);
  for (int n = 0; n < 4; ++n) CHECK(ordering_tableau(seq[n], {3, 3}) == figure[n]);
  ExhaustiveResult r = check_exhaustive(seq, {3, 3});
  CHECK(r.exhaustive);
  CHECK(r.closed_under_reversal);
}

TEST_CASE("lexicographic formula") {
  std::array<int, 2> dims{4, 3};
  auto seq = generate_lexicographic(dims);
  REQUIRE(seq.size() == 4);
  // sigma(j) = 1 + (c1 - 1) + N1 (c2 - 1), coordinates taken from each vertex.
  for (int v = 0; v < 4; ++v) {
    for (int cy = 1; cy <= 3; ++cy)
      for (int cx = 1; cx <= 4; ++cx) {
        int c1 = (v & 1) ? 4 - cx + 1 : cx;
        int c2 = (v & 2) ? 3 - cy + 1 : cy;
        int j = (cx - 1) + 4 * (cy - 1);
        CHECK(seq[v].position(j) == (c1 - 1) + 4 * (c2 - 1));
      }
  }
}

TEST_CASE("strips collapse to forward and backward") {
  for (std::array<int, 2> dims : {std::array<int, 2>{5, 1}, std::array<int, 2>{1, 5}}) {
    for (auto seq : {generate_lexicographic(dims), generate_snake(dims)}) {
      REQUIRE(seq.size() == 2);
      CHECK(seq[0] == Ordering::identity(5));
      CHECK(seq[1] == Ordering::identity(5).reversed());
      CHECK(check_exhaustive(seq, dims).exhaustive);
    }
  }
  auto two = generate_snake({2, 1});
  CHECK(two.size() == 2);
  CHECK(two[0].sequence() == std::vector<int>{0, 1});
  CHECK(two[1].sequence() == std::vector<int>{1, 0});
  auto one = generate_lexicographic({1, 1});
  CHECK(one.size() == 1);
}

TEST_CASE("2 x 2 lexicographic orderings are distinct permutations") {
  auto seq = generate_lexicographic({2, 2});
  REQUIRE(seq.size() == 4);
  std::set<std::vector<int>> distinct;
  for (const Ordering& o : seq) {
    std::vector<int> s = o.sequence();
    distinct.insert(s);
    std::sort(s.begin(), s.end());
    CHECK(s == std::vector<int>{0, 1, 2, 3});
  }
  CHECK(distinct.size() == 4);
}

TEST_CASE("snake orderings are monotone, paired by reversal and exhaustive") {
  for (std::array<int, 2> dims :
       {std::array<int, 2>{2, 2}, std::array<int, 2>{3, 3}, std::array<int, 2>{4, 3}, std::array<int, 2>{2, 5}}) {
    auto seq = generate_snake(dims);
    REQUIRE(seq.size() == 4);
    for (const Ordering& o : seq) CHECK(is_monotone(o, dims));
    CHECK(seq[3] == seq[0].reversed());
    CHECK(seq[2] == seq[1].reversed());
    ExhaustiveResult r = check_exhaustive(seq, dims);
    CHECK(r.exhaustive);
    CHECK(r.closed_under_reversal);
  }
}

TEST_CASE("one forward ordering is not exhaustive") {
  std::vector<Ordering> seq{Ordering::identity(4)};
  ExhaustiveResult r = check_exhaustive(seq, {2, 2});
  CHECK(!r.exhaustive);
  CHECK(!r.closed_under_reversal);
  REQUIRE(r.witness.size() >= 2);
  CHECK(!visits_in_order(seq[0], r.witness));

  std::vector<Ordering> fb{Ordering::identity(4), Ordering::identity(4).reversed()};
  ExhaustiveResult r2 = check_exhaustive(fb, {2, 2});
  CHECK(!r2.exhaustive);
  CHECK(r2.closed_under_reversal);
  REQUIRE(!r2.witness.empty());
  auto chains = maximal_monotone_chains({2, 2});
  CHECK(std::find(chains.begin(), chains.end(), r2.witness) != chains.end());
  for (const Ordering& o : fb) CHECK(!visits_in_order(o, r2.witness));
}

TEST_CASE("exhaustiveness matches a direct chain check") {
  auto chains = maximal_monotone_chains({3, 2});
  CHECK(!chains.empty());
  for (const auto& c : chains)
    for (std::size_t i = 1; i < c.size(); ++i) {
      int a = c[i - 1], b = c[i];
      int dx = std::abs(a % 3 - b % 3), dy = std::abs(a / 3 - b / 3);
      CHECK(dx + dy == 1);
    }
  auto lex = generate_lexicographic({3, 2});
  for (const auto& c : chains) {
    bool some = false;
    for (const Ordering& o : lex) some |= visits_in_order(o, c);
    CHECK(some);
  }
}

TEST_CASE("minimal exhaustive sizes") {
  CHECK(min_exhaustive_size({2, 2}) == 4);
  CHECK(min_exhaustive_size({2, 1}) == 2);
  CHECK(min_exhaustive_size({1, 1}) == 1);
  CHECK(min_exhaustive_size({4, 1}) == 2);
  CHECK_THROWS_AS(min_exhaustive_size({3, 2}), ConfigError);
}
