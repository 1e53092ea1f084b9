#include "helmdd/orderings.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "helmdd/errors.hpp"

namespace helmdd {

namespace {

constexpr std::size_t kMaxChains = 2000000;

void check_dims(std::array<int, 2> dims) {
  if (dims[0] < 1 || dims[1] < 1) throw ConfigError("checkerboard dimensions must be positive");
}

std::vector<int> effective_directions(std::array<int, 2> dims) {
  std::vector<int> out;
  for (int d = 0; d < 2; ++d)
    if (dims[d] > 1) out.push_back(d);
  return out;
}

// Coordinates of subdomain j (0-based cells) reflected towards vertex v.
std::array<int, 2> reflected(int j, int v, std::array<int, 2> dims, const std::vector<int>& eff) {
  std::array<int, 2> c{j % dims[0], j / dims[0]};
  for (std::size_t b = 0; b < eff.size(); ++b)
    if (v >> b & 1) c[eff[b]] = dims[eff[b]] - 1 - c[eff[b]];
  return c;
}

Ordering from_positions(const std::vector<int>& pos) {
  std::vector<int> seq(pos.size());
  for (std::size_t j = 0; j < pos.size(); ++j) seq[pos[j]] = static_cast<int>(j);
  return Ordering(seq);
}

}  // namespace

Ordering::Ordering(std::vector<int> sequence) : sigma_(std::move(sequence)), inverse_(sigma_.size(), -1) {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    int j = sigma_[i];
    if (j < 0 || j >= n || inverse_[j] != -1) throw ConfigError("ordering is not a permutation");
    inverse_[j] = i;
  }
}

Ordering Ordering::identity(int n) {
  std::vector<int> s(n);
  std::iota(s.begin(), s.end(), 0);
  return Ordering(s);
}

Ordering Ordering::reversed() const {
  std::vector<int> s(sigma_.rbegin(), sigma_.rend());
  return Ordering(s);
}

std::string to_string(const Ordering& o) {
  std::ostringstream out;
  for (int i = 0; i < o.size(); ++i) out << (i ? " " : "") << o.at(i) + 1;
  return out.str();
}

std::vector<Ordering> generate_lexicographic(std::array<int, 2> dims) {
  check_dims(dims);
  const int N = dims[0] * dims[1];
  std::vector<int> eff = effective_directions(dims);
  std::vector<Ordering> out;
  for (int v = 0; v < (1 << eff.size()); ++v) {
    std::vector<int> pos(N);
    for (int j = 0; j < N; ++j) {
      auto c = reflected(j, v, dims, eff);
      pos[j] = c[0] + dims[0] * c[1];
    }
    out.push_back(from_positions(pos));
  }
  return out;
}

std::vector<Ordering> generate_snake(std::array<int, 2> dims) {
  check_dims(dims);
  const int N = dims[0] * dims[1];
  std::vector<int> eff = effective_directions(dims);
  const int nv = 1 << eff.size();
  std::vector<std::vector<int>> seqs(nv);
  for (int v = 0; v < nv; ++v) {
    if (!seqs[v].empty()) continue;
    // Anti-diagonals of the reflected coordinates, alternating direction: a linear extension of
    // the componentwise order seen from vertex v.
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::array<int, 2>> rc(N);
    for (int j = 0; j < N; ++j) rc[j] = reflected(j, v, dims, eff);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      int sa = rc[a][0] + rc[a][1], sb = rc[b][0] + rc[b][1];
      if (sa != sb) return sa < sb;
      return (sa % 2 == 0) ? rc[a][1] < rc[b][1] : rc[a][1] > rc[b][1];
    });
    seqs[v] = order;
    int opposite = v ^ (nv - 1);
    if (seqs[opposite].empty()) seqs[opposite].assign(order.rbegin(), order.rend());
  }
  std::vector<Ordering> out;
  for (auto& s : seqs) out.emplace_back(s);
  return out;
}

std::vector<std::vector<int>> ordering_tableau(const Ordering& o, std::array<int, 2> dims) {
  std::vector<std::vector<int>> rows;
  for (int cy = dims[1] - 1; cy >= 0; --cy) {
    std::vector<int> row;
    for (int cx = 0; cx < dims[0]; ++cx) row.push_back(o.position(cx + dims[0] * cy) + 1);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::vector<int>> maximal_monotone_chains(std::array<int, 2> dims) {
  check_dims(dims);
  std::vector<std::vector<int>> chains;
  for (int sx : {1, -1}) {
    for (int sy : {1, -1}) {
      int x0 = sx > 0 ? 0 : dims[0] - 1;
      int y0 = sy > 0 ? 0 : dims[1] - 1;
      std::vector<int> path{x0 + dims[0] * y0};
      // Depth-first over unit steps in the sign directions.
      auto rec = [&](auto&& self, int x, int y) -> void {
        bool moved = false;
        if (x + sx >= 0 && x + sx < dims[0]) {
          moved = true;
          path.push_back(x + sx + dims[0] * y);
          self(self, x + sx, y);
          path.pop_back();
        }
        if (y + sy >= 0 && y + sy < dims[1]) {
          moved = true;
          path.push_back(x + dims[0] * (y + sy));
          self(self, x, y + sy);
          path.pop_back();
        }
        if (!moved) {
          if (chains.size() >= kMaxChains) throw BudgetError("too many monotone chains to enumerate");
          chains.push_back(path);
        }
      };
      rec(rec, x0, y0);
    }
  }
  return chains;
}

namespace {

bool in_order(const Ordering& o, const std::vector<int>& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (o.position(chain[i - 1]) > o.position(chain[i])) return false;
  return true;
}

ExhaustiveResult check_with_chains(const std::vector<Ordering>& seq,
                                   const std::vector<std::vector<int>>& chains) {
  ExhaustiveResult r;
  r.closed_under_reversal = true;
  for (const Ordering& o : seq) {
    Ordering rev = o.reversed();
    if (std::find(seq.begin(), seq.end(), rev) == seq.end()) {
      r.closed_under_reversal = false;
      break;
    }
  }
  bool chains_ok = true;
  for (const auto& chain : chains) {
    bool found = false;
    for (const Ordering& o : seq) {
      if (in_order(o, chain)) {
        found = true;
        break;
      }
    }
    if (!found) {
      chains_ok = false;
      r.witness = chain;
      break;
    }
  }
  r.exhaustive = r.closed_under_reversal && chains_ok;
  return r;
}

}  // namespace

ExhaustiveResult check_exhaustive(const std::vector<Ordering>& seq, std::array<int, 2> dims) {
  const int N = dims[0] * dims[1];
  for (const Ordering& o : seq)
    if (o.size() != N) throw ConfigError("ordering size does not match the checkerboard");
  return check_with_chains(seq, maximal_monotone_chains(dims));
}

int min_exhaustive_size(std::array<int, 2> dims) {
  check_dims(dims);
  const int N = dims[0] * dims[1];
  if (N > 4) throw BudgetError("min_exhaustive_size: instance too large (more than 4 subdomains)");
  std::vector<Ordering> all;
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    all.emplace_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  auto chains = maximal_monotone_chains(dims);
  const int P = static_cast<int>(all.size());
  for (int S = 1; S <= P; ++S) {
    std::vector<int> idx(S);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<Ordering> seq;
      for (int i : idx) seq.push_back(all[i]);
      if (check_with_chains(seq, chains).exhaustive) return S;
      int i = S - 1;
      while (i >= 0 && idx[i] == P - S + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int m = i + 1; m < S; ++m) idx[m] = idx[m - 1] + 1;
    }
  }
  return P;
}

}  // namespace helmdd
