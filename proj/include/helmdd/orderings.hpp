#pragma once

#include <array>
#include <string>
#include <vector>

namespace helmdd {

// Visiting order of a sweep: at(i) is the subdomain visited at position i (0-based throughout).
class Ordering {
 public:
  Ordering() = default;
  explicit Ordering(std::vector<int> sequence);

  static Ordering identity(int n);

  int size() const { return static_cast<int>(sigma_.size()); }
  int at(int position) const { return sigma_[position]; }
  int position(int subdomain) const { return inverse_[subdomain]; }
  const std::vector<int>& sequence() const { return sigma_; }
  Ordering reversed() const;
  bool precedes(int i, int j) const { return inverse_[i] <= inverse_[j]; }

  bool operator==(const Ordering& o) const { return sigma_ == o.sigma_; }

 private:
  std::vector<int> sigma_;
  std::vector<int> inverse_;
};

std::string to_string(const Ordering& o);

// One ordering per checkerboard vertex, over directions with more than one cell only
// (coincident vertices of collapsed directions are merged). Vertex v has bit l set when its
// origin sits at the high end of the l-th such direction; the first direction varies fastest.
std::vector<Ordering> generate_lexicographic(std::array<int, 2> dims);
std::vector<Ordering> generate_snake(std::array<int, 2> dims);

// Visit positions (1-based) laid out on the grid, rows from top (y = N2) to bottom.
std::vector<std::vector<int>> ordering_tableau(const Ordering& o, std::array<int, 2> dims);

struct ExhaustiveResult {
  bool exhaustive = false;
  bool closed_under_reversal = false;
  std::vector<int> witness;  // monotone chain of subdomains that no ordering visits in order
};

ExhaustiveResult check_exhaustive(const std::vector<Ordering>& seq, std::array<int, 2> dims);

// Smallest size of an exhaustive sequence, by exhaustive search (at most 4 subdomains).
int min_exhaustive_size(std::array<int, 2> dims);

// Maximal unit-step chains monotone in every coordinate, for all sign patterns.
std::vector<std::vector<int>> maximal_monotone_chains(std::array<int, 2> dims);

}  // namespace helmdd
