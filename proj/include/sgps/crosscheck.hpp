#pragma once

#include "nlohmann/json_fwd.hpp"
#include "sgps/symsolve.hpp"

namespace sgps {

struct CheckOutcome {
  std::string name;
  long long pass = 0;
  long long fail = 0;
  std::vector<std::string> examples;  // first few failures, human-readable
};

struct CrosscheckReport {
  std::vector<CheckOutcome> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (c.fail > 0) return false;
    return true;
  }
  nlohmann::json to_json() const;
};

// Validates a solved system against independent ground truth:
//  - pointwise-pre: symbolic one-step operators vs concrete successor
//    enumeration on every config with channel lengths <= k, against
//    `samples` seeded random literal regions;
//  - fixpoint-equation: every stored reachability fixpoint satisfies its
//    defining equation under canonical equality;
//  - partition: the three winning regions tile the full space;
//  - strategy-closure: seeded plays from the almost-sure regions never
//    leave them.
CrosscheckReport crosscheck(const SymSolution& sol, int k, int samples, std::uint64_t seed);

}  // namespace sgps
