#include "sgps/oracle.hpp"

#include <algorithm>

namespace sgps {

FiniteMemoryStrategy lift_memoryless(const GameGraph& g, const MemorylessStrategy& f) {
  FiniteMemoryStrategy m;
  m.player = f.player;
  m.memory_size = 1;
  m.initial_memory = 0;
  m.next.assign(g.num_states(), std::vector<int>(1, -1));
  m.update.assign(g.num_states(), std::vector<int>(1, 0));
  for (int s = 0; s < g.num_states(); ++s) m.next[s][0] = f.choice[s];
  return m;
}

namespace {

int completed_choice(const GameGraph& g, const MemorylessStrategy& f, int s) {
  if (f.choice[s] >= 0) return f.choice[s];
  // Deterministic completion: smallest-id successor.
  return *std::min_element(g.successors(s).begin(), g.successors(s).end());
}

// Iterative Tarjan over the chain induced by the two fixed strategies.
struct SccResult {
  std::vector<int> comp;          // state -> component id
  int num_comps = 0;
  std::vector<bool> is_bottom;    // component -> no edge leaves it
  std::vector<int> max_color;     // component -> largest color inside
};

SccResult chain_sccs(const GameGraph& g, const std::vector<std::vector<int>>& succ) {
  int n = g.num_states();
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int counter = 0;

  struct Frame {
    int v;
    size_t next_child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      if (fr.next_child < succ[fr.v].size()) {
        int w = succ[fr.v][fr.next_child++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        if (low[fr.v] == index[fr.v]) {
          int c = res.num_comps++;
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            res.comp[w] = c;
            if (w == fr.v) break;
          }
        }
        int v = fr.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }

  res.is_bottom.assign(res.num_comps, true);
  res.max_color.assign(res.num_comps, -1);
  for (int s = 0; s < n; ++s) {
    int c = res.comp[s];
    res.max_color[c] = std::max(res.max_color[c], g.color(s));
    for (int t : succ[s])
      if (res.comp[t] != c) res.is_bottom[c] = false;
  }
  return res;
}

}  // namespace

FixedVerdict classify_fixed(const GameGraph& g, const MemorylessStrategy& strat0,
                            const MemorylessStrategy& strat1) {
  int n = g.num_states();
  std::vector<std::vector<int>> succ(n);
  for (int s = 0; s < n; ++s) {
    switch (g.owner(s)) {
      case Owner::P0:
        succ[s] = {completed_choice(g, strat0, s)};
        break;
      case Owner::P1:
        succ[s] = {completed_choice(g, strat1, s)};
        break;
      case Owner::Random:
        succ[s] = g.successors(s);  // probabilities are all positive
        break;
    }
  }

  SccResult sccs = chain_sccs(g, succ);

  // reach[s]: bit c set iff component c is reachable from s. Iterated to a
  // fixpoint; the chains here are tiny.
  size_t words = size_t((sccs.num_comps + 63) / 64);
  std::vector<std::vector<std::uint64_t>> reach(n, std::vector<std::uint64_t>(words, 0));
  for (int s = 0; s < n; ++s)
    reach[s][sccs.comp[s] >> 6] |= std::uint64_t(1) << (sccs.comp[s] & 63);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s)
      for (int t : succ[s])
        for (size_t w = 0; w < words; ++w) {
          std::uint64_t add = reach[t][w] & ~reach[s][w];
          if (add) {
            reach[s][w] |= add;
            changed = true;
          }
        }
  }

  FixedVerdict out;
  for (int x = 0; x < 2; ++x) {
    out.almost_sure[x] = Region::empty(g);
    out.positive[x] = Region::empty(g);
  }
  for (int s = 0; s < n; ++s) {
    bool all_good[2] = {true, true};
    bool some_good[2] = {false, false};
    for (int c = 0; c < sccs.num_comps; ++c) {
      if (!((reach[s][c >> 6] >> (c & 63)) & 1)) continue;
      if (!sccs.is_bottom[c]) continue;
      int good_for = sccs.max_color[c] % 2;
      some_good[good_for] = true;
      all_good[1 - good_for] = false;
    }
    for (int x = 0; x < 2; ++x) {
      if (all_good[x] && some_good[x]) out.almost_sure[x].set(s);
      if (some_good[x]) out.positive[x].set(s);
    }
  }
  return out;
}

QualitativeVerdict classify(const GameGraph& g, const Limits& limits) {
  require_valid(g);
  int n = g.num_states();

  std::vector<int> owned0, owned1;
  long long combos = 1;
  for (int s = 0; s < n; ++s) {
    if (g.owner(s) == Owner::P0) owned0.push_back(s);
    if (g.owner(s) == Owner::P1) owned1.push_back(s);
    if (g.owner(s) != Owner::Random) {
      combos *= (long long)g.successors(s).size();
      if (combos > limits.enum_cap)
        throw SgpsError(ErrorKind::cap_exceeded, "enumeration-cap");
    }
  }

  auto strategies_for = [&](int player, const std::vector<int>& owned) {
    std::vector<MemorylessStrategy> out;
    std::vector<size_t> idx(owned.size(), 0);
    for (;;) {
      MemorylessStrategy f = empty_strategy(g, player);
      for (size_t i = 0; i < owned.size(); ++i)
        f.choice[owned[i]] = g.successors(owned[i])[idx[i]];
      out.push_back(std::move(f));
      size_t pos = 0;
      while (pos < owned.size()) {
        if (++idx[pos] < g.successors(owned[pos]).size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos == owned.size()) break;
    }
    return out;
  };

  std::vector<MemorylessStrategy> f0s = strategies_for(0, owned0);
  std::vector<MemorylessStrategy> f1s = strategies_for(1, owned1);

  QualitativeVerdict verdict;
  for (int x = 0; x < 2; ++x) {
    verdict.almost_sure[x] = Region::empty(g);
    verdict.positive[x] = Region::empty(g);
  }

  // Player 0 picks a strategy, player 1 answers with his worst case.
  for (const auto& f0 : f0s) {
    Region as_all = Region::full(g);
    Region pos_all = Region::full(g);
    for (const auto& f1 : f1s) {
      FixedVerdict fv = classify_fixed(g, f0, f1);
      as_all &= fv.almost_sure[0];
      pos_all &= fv.positive[0];
    }
    verdict.almost_sure[0] |= as_all;
    verdict.positive[0] |= pos_all;
  }
  // And symmetrically for player 1.
  for (const auto& f1 : f1s) {
    Region as_all = Region::full(g);
    Region pos_all = Region::full(g);
    for (const auto& f0 : f0s) {
      FixedVerdict fv = classify_fixed(g, f0, f1);
      as_all &= fv.almost_sure[1];
      pos_all &= fv.positive[1];
    }
    verdict.almost_sure[1] |= as_all;
    verdict.positive[1] |= pos_all;
  }
  return verdict;
}

}  // namespace sgps
