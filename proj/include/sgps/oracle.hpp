#pragma once

#include <array>

#include "sgps/game.hpp"

namespace sgps {

// Strategy with a finite memory: next move depends on (state, memory), and
// the memory is updated on every visited state.
struct FiniteMemoryStrategy {
  int player = 0;
  int memory_size = 1;
  int initial_memory = 0;
  // next[s][m]: successor for owned states (-1 elsewhere); update[s][m]: new memory.
  std::vector<std::vector<int>> next;
  std::vector<std::vector<int>> update;
};

FiniteMemoryStrategy lift_memoryless(const GameGraph& g, const MemorylessStrategy& f);

// Qualitative classification of the fixed-strategy Markov chain: for each
// player and state, whether the player's parity objective holds almost
// surely, with positive probability only, or not at all.
enum class WinMode { zero = 0, positive = 1, almost_sure = 2 };

struct FixedVerdict {
  std::array<Region, 2> almost_sure;
  std::array<Region, 2> positive;
};

// Both strategies fixed (partial maps are completed with the smallest-id
// successor), the induced chain is finite; a run almost surely settles in a
// bottom SCC and visits all of it infinitely often.
FixedVerdict classify_fixed(const GameGraph& g, const MemorylessStrategy& strat0,
                            const MemorylessStrategy& strat1);

struct QualitativeVerdict {
  std::array<Region, 2> almost_sure;
  std::array<Region, 2> positive;  // includes the almost-sure states

  WinMode mode(int s, int player) const {
    if (almost_sure[player].test(s)) return WinMode::almost_sure;
    if (positive[player].test(s)) return WinMode::positive;
    return WinMode::zero;
  }
};

// Ground truth by exhaustive memoryless strategy enumeration. Guarded by
// limits.enum_cap on the product of out-degrees over owned states.
QualitativeVerdict classify(const GameGraph& g, const Limits& limits = {});

}  // namespace sgps
