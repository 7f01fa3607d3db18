#pragma once

#include "sgps/game.hpp"

namespace sgps {

// Layered fixpoint for positive-probability reachability. `force` is the set
// from which `player` reaches the target with positive probability against
// any opponent; `avoid` is its complement and a trap for `player`.
struct ForceCertificate {
  int player = 0;
  Region target;
  Region force;
  Region avoid;
  std::vector<Region> layers;  // strictly growing, layers.front() == target

  // Index of the first layer containing s, or -1 when s is outside force.
  int layer_of(int s) const {
    for (size_t i = 0; i < layers.size(); ++i)
      if (layers[i].test(s)) return int(i);
    return -1;
  }
};

ForceCertificate force_set(const GameGraph& g, int player, const Region& target);

// Moves of `player` inside force minus target; every choice lands in a
// strictly lower layer (ties broken toward the smallest state id).
MemorylessStrategy force_strategy(const GameGraph& g, const ForceCertificate& cert);

// Moves of the opponent inside avoid; every choice stays in avoid.
MemorylessStrategy avoid_strategy(const GameGraph& g, const ForceCertificate& cert);

}  // namespace sgps
