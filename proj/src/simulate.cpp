#include "sgps/simulate.hpp"

#include <algorithm>

#include "nlohmann/json.hpp"

namespace sgps {

using nlohmann::json;

json PlayStats::to_json() const {
  json j;
  j["rng"] = rng_name;
  j["seed"] = seed;
  j["trials"] = trials;
  j["horizon"] = horizon;
  j["target_hit_trials"] = target_hit_trials;
  j["tail_color_steps"] = tail_color_steps;
  j["attractor_visits"] = attractor_visits;
  j["region_exit_steps"] = region_exit_steps;
  return j;
}

std::uint64_t derive_trial_seed(std::uint64_t seed, int trial) {
  // splitmix64 finalizer over (seed, trial).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (std::uint64_t(trial) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_double(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

namespace {

int pick_uniform(std::mt19937_64& rng, int n) { return int(rng() % std::uint64_t(n)); }

int sample_random_successor(const GameGraph& g, int s, std::mt19937_64& rng) {
  const auto& succ = g.successors(s);
  const auto& probs = g.probabilities(s);
  double u = uniform_double(rng);
  double acc = 0;
  for (size_t i = 0; i < succ.size(); ++i) {
    acc += probs[i];
    if (u < acc) return succ[i];
  }
  return succ.back();
}

int smallest_successor(const GameGraph& g, int s) {
  return *std::min_element(g.successors(s).begin(), g.successors(s).end());
}

}  // namespace

PlayStats simulate_explicit(const GameGraph& g, int start, const ExplicitPolicy& policy,
                            int policy_player, const FiniteMemoryStrategy* opponent,
                            int horizon, int trials, std::uint64_t seed, const Region* target,
                            const Region* track_region) {
  if (horizon <= 0 || trials <= 0)
    throw SgpsError(ErrorKind::invalid_input, "horizon and trials must be positive");
  PlayStats stats;
  stats.seed = seed;
  stats.trials = trials;
  stats.horizon = horizon;
  stats.tail_color_steps.assign(size_t(g.max_color()) + 1, 0);
  Owner mine = player_owner(policy_player);

  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(derive_trial_seed(seed, trial));
    int state = start;
    int memory = opponent ? opponent->initial_memory : 0;
    bool hit = false;
    for (int step = 0; step < horizon; ++step) {
      if (target && target->test(state)) hit = true;
      if (track_region && !track_region->test(state)) ++stats.region_exit_steps;
      if (step * 2 >= horizon) ++stats.tail_color_steps[size_t(g.color(state))];

      int next;
      Owner o = g.owner(state);
      if (o == Owner::Random) {
        next = sample_random_successor(g, state, rng);
      } else if (o == mine) {
        int choice = policy ? policy(state) : -1;
        next = choice >= 0 ? choice : smallest_successor(g, state);
      } else {
        if (opponent) {
          next = opponent->next[state][memory];
          if (next < 0) next = smallest_successor(g, state);
        } else {
          next = g.successors(state)[pick_uniform(rng, int(g.successors(state).size()))];
        }
      }
      if (opponent) memory = opponent->update[state][memory];
      state = next;
    }
    if (target && target->test(state)) hit = true;
    if (hit) ++stats.target_hit_trials;
  }
  return stats;
}

ConcreteConfig sample_loss_step(const LcsSystem& sys, const ConcreteConfig& cfg,
                                std::mt19937_64& rng) {
  ConcreteConfig out;
  out.ctrl = cfg.ctrl;
  out.phase = 1;
  out.channels.reserve(cfg.channels.size());
  double lam = sys.lambda();
  for (const std::string& w : cfg.channels) {
    std::string kept;
    for (char m : w)
      if (uniform_double(rng) >= lam) kept.push_back(m);
    out.channels.push_back(std::move(kept));
  }
  return out;
}

PlayStats simulate_lcs(const LcsSystem& sys, const ConcreteConfig& start,
                       const LcsPolicy& policy, int policy_player, int horizon, int trials,
                       std::uint64_t seed, const SymbolicRegion* track_region) {
  if (horizon <= 0 || trials <= 0)
    throw SgpsError(ErrorKind::invalid_input, "horizon and trials must be positive");
  PlayStats stats;
  stats.seed = seed;
  stats.trials = trials;
  stats.horizon = horizon;
  stats.tail_color_steps.assign(size_t(sys.max_color()) + 1, 0);
  Owner mine = player_owner(policy_player);

  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(derive_trial_seed(seed, trial));
    ConcreteConfig cfg = start;
    for (int step = 0; step < horizon; ++step) {
      if (attractor_contains(cfg)) ++stats.attractor_visits;
      if (track_region && !sym_member(*track_region, cfg)) ++stats.region_exit_steps;
      if (step * 2 >= horizon) ++stats.tail_color_steps[size_t(sys.control_color(cfg.ctrl))];

      if (cfg.phase == 0) {
        cfg = sample_loss_step(sys, cfg, rng);
      } else if (sys.control_owner(cfg.ctrl) == mine && policy) {
        cfg = policy(cfg);
      } else {
        auto moves = player_successors(sys, cfg);
        cfg = moves[pick_uniform(rng, int(moves.size()))].to;
      }
    }
  }
  return stats;
}

}  // namespace sgps
