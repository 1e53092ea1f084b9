#pragma once

#include <algorithm>
#include <vector>

#include "helmdd/decomposition.hpp"

// Longest word followed by a sampled path, by a forward pass over automaton states
// "prefix matched, now inside the extended subdomain j".
inline int longest_followed_word(const std::vector<helmdd::Point>& pts, const helmdd::Decomposition& dec,
                                 double eps_ext) {
  const int J = dec.size();
  std::vector<helmdd::Box> cut(J), ext(J);
  for (int j = 0; j < J; ++j) {
    cut[j] = dec.cutoff_support(j);
    ext[j] = dec.subdomains[j].outer.inflated(eps_ext);
  }
  auto crossing = [&](int a, int b, const helmdd::Point& x) {
    return cut[a].contains(x) && dec.subdomains[b].outer.contains(x) && dec.in_mismatch(b, x);
  };
  int best_word = 0;
  std::vector<int> state(J, 0), next(J);
  for (const helmdd::Point& x : pts) {
    for (int j = 0; j < J; ++j)
      if (cut[j].contains(x)) best_word = std::max(best_word, std::max(1, state[j]));
    std::fill(next.begin(), next.end(), 0);
    for (int j = 0; j < J; ++j) {
      if (state[j] > 0 && ext[j].contains(x)) next[j] = std::max(next[j], state[j]);
    }
    for (int a = 0; a < J; ++a) {
      int from = std::max(1, state[a] > 0 && ext[a].contains(x) ? state[a] : 0);
      for (int b = 0; b < J; ++b)
        if (b != a && crossing(a, b, x)) next[b] = std::max(next[b], from + 1);
    }
    state.swap(next);
    for (int j = 0; j < J; ++j)
      if (state[j] > 0 && cut[j].contains(x)) best_word = std::max(best_word, state[j]);
  }
  return best_word;
}

// Straight segments between all pairs of points on a uniform grid of the boundary of `box`.
inline int longest_word_over_lines(const helmdd::Decomposition& dec, const helmdd::Box& box, int per_side,
                                   double ds, double eps_ext) {
  std::vector<helmdd::Point> ends;
  for (int i = 0; i < per_side; ++i) {
    double t = (i + 0.5) / per_side;
    double x = box.lo.x() + t * (box.hi.x() - box.lo.x()), y = box.lo.y() + t * (box.hi.y() - box.lo.y());
    ends.emplace_back(x, box.lo.y());
    ends.emplace_back(x, box.hi.y());
    ends.emplace_back(box.lo.x(), y);
    ends.emplace_back(box.hi.x(), y);
  }
  int best = 0;
  std::vector<helmdd::Point> pts;
  for (std::size_t a = 0; a < ends.size(); ++a) {
    for (std::size_t b = a + 1; b < ends.size(); ++b) {
      double len = (ends[b] - ends[a]).norm();
      int m = std::max(2, static_cast<int>(len / ds));
      pts.clear();
      for (int i = 0; i <= m; ++i) pts.push_back(ends[a] + (ends[b] - ends[a]) * (double(i) / m));
      best = std::max(best, longest_followed_word(pts, dec, eps_ext));
    }
  }
  return best;
}
