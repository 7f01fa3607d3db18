#pragma once

// Shared helpers for the test suites: small game builders, a seeded random
// game generator, and brute-force oracles kept independent of the solver
// implementations they check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sgps/game.hpp"
#include "sgps/reach.hpp"

namespace sgps_test {

using namespace sgps;

inline GameGraph chain_game() {
  // t <- s1 (P0) <- s2 (P1, only edge to s1); t has a self-loop.
  GameBuilder b;
  b.set_rank(0);
  int t = b.add_state("t", Owner::P0, 0);
  int s1 = b.add_state("s1", Owner::P0, 0);
  int s2 = b.add_state("s2", Owner::P1, 0);
  b.add_edge(t, t);
  b.add_edge(s1, t);
  b.add_edge(s2, s1);
  return b.finalize();
}

// The three-state split: random r branches to a P1 color-1 loop and a P0
// color-2 loop.
inline GameGraph three_state_game() {
  GameBuilder b;
  b.set_rank(2);
  int r = b.add_state("r", Owner::Random, 0);
  int a = b.add_state("a", Owner::P1, 1);
  int bb = b.add_state("b", Owner::P0, 2);
  b.add_prob_edge(r, a, 0.5);
  b.add_prob_edge(r, bb, 0.5);
  b.add_edge(a, a);
  b.add_edge(bb, bb);
  return b.finalize();
}

// Truncation of the staircase family: s0 (P1, color 0) picks any of
// s1..sN; s1 is an absorbing color-2 loop; sk (k >= 2) moves to s_{k-1} or
// back to s0 with probability 1/2 each, color 1.
inline GameGraph staircase_game(int n) {
  GameBuilder b;
  b.set_rank(2);
  int s0 = b.add_state("s0", Owner::P1, 0);
  std::vector<int> s(n + 1, -1);
  s[0] = s0;
  for (int k = 1; k <= n; ++k)
    s[k] = b.add_state("s" + std::to_string(k), Owner::Random, k == 1 ? 2 : 1);
  for (int k = 1; k <= n; ++k) b.add_edge(s0, s[k]);
  b.add_prob_edge(s[1], s[1], 1.0);
  for (int k = 2; k <= n; ++k) {
    b.add_prob_edge(s[k], s[k - 1], 0.5);
    b.add_prob_edge(s[k], s0, 0.5);
  }
  return b.finalize();
}

struct RandomGameOptions {
  int max_states = 6;
  int max_color = 3;
  int max_out_degree = 3;
  bool force_random_state = true;   // require at least one random state
  bool allow_random_states = true;  // false: two-player games only
};

inline GameGraph random_game(std::mt19937_64& rng, const RandomGameOptions& opt) {
  auto pick = [&](int n) { return int(rng() % std::uint64_t(n)); };
  int n = 1 + pick(opt.max_states);
  GameBuilder b;
  std::vector<Owner> owners(n);
  int rank = 0;
  for (int s = 0; s < n; ++s) {
    Owner o;
    if (opt.allow_random_states)
      o = Owner(pick(3));
    else
      o = Owner(pick(2));
    owners[s] = o;
  }
  if (opt.force_random_state && opt.allow_random_states) {
    bool has_random = false;
    for (Owner o : owners) has_random |= (o == Owner::Random);
    if (!has_random) owners[pick(n)] = Owner::Random;
  }
  std::vector<int> colors(n);
  for (int s = 0; s < n; ++s) {
    colors[s] = pick(opt.max_color + 1);
    rank = std::max(rank, colors[s]);
  }
  b.set_rank(rank);
  for (int s = 0; s < n; ++s)
    b.add_state("s" + std::to_string(s), owners[s], colors[s]);
  for (int s = 0; s < n; ++s) {
    int deg = 1 + pick(std::min(opt.max_out_degree, n));
    std::vector<int> targets;
    while (int(targets.size()) < deg) {
      int t = pick(n);
      bool dup = false;
      for (int u : targets) dup |= (u == t);
      if (!dup) targets.push_back(t);
    }
    if (owners[s] == Owner::Random) {
      // Random positive weights, normalized; last entry absorbs rounding.
      std::vector<double> w(targets.size());
      double total = 0;
      for (auto& x : w) {
        x = 1.0 + double(pick(4));
        total += x;
      }
      double acc = 0;
      for (size_t i = 0; i + 1 < targets.size(); ++i) {
        double p = w[i] / total;
        acc += p;
        b.add_prob_edge(s, targets[i], p);
      }
      b.add_prob_edge(s, targets.back(), 1.0 - acc);
    } else {
      for (int t : targets) b.add_edge(s, t);
    }
  }
  return b.finalize();
}

// Reference force computation straight from the layer equation, used to
// pin down the worklist implementation.
inline std::vector<Region> naive_force_layers(const GameGraph& g, int player,
                                              const Region& target) {
  std::vector<Region> layers{target};
  Owner mine = player_owner(player);
  Owner theirs = player_owner(opponent(player));
  for (;;) {
    const Region& cur = layers.back();
    Region pe = pre_exists(g, cur);
    Region pf = pre_forall(g, cur);
    Region next = cur;
    for (int s = 0; s < g.num_states(); ++s) {
      Owner o = g.owner(s);
      if ((o == mine || o == Owner::Random) && pe.test(s)) next.set(s);
      if (o == theirs && pf.test(s)) next.set(s);
    }
    if (next == cur) break;
    layers.push_back(next);
  }
  return layers;
}

}  // namespace sgps_test
