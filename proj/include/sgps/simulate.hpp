#pragma once

#include <functional>
#include <random>

#include "nlohmann/json_fwd.hpp"
#include "sgps/oracle.hpp"
#include "sgps/symbolic.hpp"

namespace sgps {

// Seeded Monte Carlo plays. Trials run off per-trial derived seeds, so the
// outcome is independent of scheduling and bit-reproducible for a fixed seed.
struct PlayStats {
  std::string rng_name = "mt19937_64";
  std::uint64_t seed = 0;
  int trials = 0;
  int horizon = 0;
  long long target_hit_trials = 0;         // trials that touched the target
  std::vector<long long> tail_color_steps;  // per color, steps in the final half
  long long attractor_visits = 0;           // steps with all channels empty
  long long region_exit_steps = 0;          // steps outside the tracked region

  nlohmann::json to_json() const;
};

std::uint64_t derive_trial_seed(std::uint64_t seed, int trial);
double uniform_double(std::mt19937_64& rng);

using ExplicitPolicy = std::function<int(int)>;

// policy moves states of `policy_player`; the opponent follows the supplied
// finite-memory strategy, or picks uniformly when none is given.
PlayStats simulate_explicit(const GameGraph& g, int start, const ExplicitPolicy& policy,
                            int policy_player, const FiniteMemoryStrategy* opponent,
                            int horizon, int trials, std::uint64_t seed,
                            const Region* target = nullptr,
                            const Region* track_region = nullptr);

// One loss phase: every message survives independently with rate 1 - lambda.
ConcreteConfig sample_loss_step(const LcsSystem& sys, const ConcreteConfig& cfg,
                                std::mt19937_64& rng);

using LcsPolicy = std::function<ConcreteConfig(const ConcreteConfig&)>;

PlayStats simulate_lcs(const LcsSystem& sys, const ConcreteConfig& start,
                       const LcsPolicy& policy, int policy_player, int horizon, int trials,
                       std::uint64_t seed, const SymbolicRegion* track_region = nullptr);

}  // namespace sgps
