#pragma once

// Self-contained classical two-player parity solver used as an independent
// reference; deliberately shares no code with the solver under test.

#include <algorithm>
#include <vector>

#include "sgps/game.hpp"

namespace sgps_test {

struct ZGame {
  std::vector<int> owner;  // 0 or 1
  std::vector<int> color;
  std::vector<std::vector<int>> succ;
};

inline ZGame zgame_from(const sgps::GameGraph& g) {
  ZGame z;
  for (int s = 0; s < g.num_states(); ++s) {
    z.owner.push_back(g.owner(s) == sgps::Owner::P0 ? 0 : 1);
    z.color.push_back(g.color(s));
    z.succ.push_back(g.successors(s));
  }
  return z;
}

// Classic player-p attractor over the alive subset.
inline std::vector<bool> z_attractor(const ZGame& g, const std::vector<bool>& alive, int p,
                                     std::vector<bool> target) {
  size_t n = g.owner.size();
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t s = 0; s < n; ++s) {
      if (!alive[s] || target[s]) continue;
      bool any = false, all = true;
      for (int t : g.succ[s]) {
        if (!alive[t]) continue;
        if (target[t])
          any = true;
        else
          all = false;
      }
      bool take = (g.owner[s] == p) ? any : (any && all);
      if (take) {
        target[s] = true;
        grew = true;
      }
    }
  }
  return target;
}

// Returns (win0, win1) over the alive subset.
inline std::pair<std::vector<bool>, std::vector<bool>> z_solve(const ZGame& g,
                                                               std::vector<bool> alive) {
  size_t n = g.owner.size();
  std::vector<bool> none(n, false);
  int m = -1;
  for (size_t s = 0; s < n; ++s)
    if (alive[s]) m = std::max(m, g.color[s]);
  if (m < 0) return {none, none};
  int p = m % 2;

  std::vector<bool> top(n, false);
  for (size_t s = 0; s < n; ++s)
    if (alive[s] && g.color[s] == m) top[s] = true;
  std::vector<bool> a = z_attractor(g, alive, p, top);

  std::vector<bool> rest = alive;
  for (size_t s = 0; s < n; ++s)
    if (a[s]) rest[s] = false;
  auto [w0, w1] = z_solve(g, rest);
  const std::vector<bool>& opp_w = (p == 0) ? w1 : w0;

  bool opp_empty = std::none_of(opp_w.begin(), opp_w.end(), [](bool b) { return b; });
  if (opp_empty) {
    std::vector<bool> mine = alive;
    return p == 0 ? std::make_pair(mine, none) : std::make_pair(none, mine);
  }

  std::vector<bool> b = z_attractor(g, alive, 1 - p, opp_w);
  std::vector<bool> rest2 = alive;
  for (size_t s = 0; s < n; ++s)
    if (b[s]) rest2[s] = false;
  auto [v0, v1] = z_solve(g, rest2);
  if (p == 0)
    for (size_t s = 0; s < n; ++s) v1[s] = v1[s] || b[s];
  else
    for (size_t s = 0; s < n; ++s) v0[s] = v0[s] || b[s];
  return {v0, v1};
}

inline std::pair<std::vector<bool>, std::vector<bool>> zielonka_winners(
    const sgps::GameGraph& g) {
  ZGame z = zgame_from(g);
  std::vector<bool> alive(g.num_states(), true);
  return z_solve(z, alive);
}

}  // namespace sgps_test
