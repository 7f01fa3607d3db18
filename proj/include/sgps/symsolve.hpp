#pragma once

#include <memory>

#include "sgps/symbolic.hpp"

namespace sgps {

// Symbolic positive-reachability fixpoint, relative to the subgame
// `restriction`. Layers are iterated until two consecutive ones are equal;
// finiteness of that index is the well-quasi-order argument, and the
// iteration cap only turns a violation into a loud error.
struct SymForceCertificate {
  int player = 0;
  SymbolicRegion target;       // R_0 (already intersected with restriction)
  SymbolicRegion restriction;
  std::vector<SymbolicRegion> layers;
  SymbolicRegion force;
  SymbolicRegion avoid;        // restriction minus force

  int rounds() const { return int(layers.size()) - 1; }
};

SymForceCertificate sym_force(const LcsSystemPtr& sys, int player, const SymbolicRegion& target,
                              const SymbolicRegion& restriction, const Limits& limits = {});

struct SymCertNode {
  char kind = 'C';
  int n = 0;
  int favored = 0;
  SymbolicRegion restriction;
  SymbolicRegion result;

  struct Iteration {
    SymForceCertificate main;  // X_i ('C') or U_i ('D')
    SymbolicRegion zset;       // 'C' only
    SymForceCertificate z_cert;
    SymbolicRegion part;
    SymbolicRegion combined;   // Y_i or V_i
    std::unique_ptr<SymCertNode> child;
  };
  std::vector<Iteration> iterations;
};

struct SymSolveMetrics {
  long long force_calls = 0;
  int max_force_rounds = 0;
  int max_outer_iterations = 0;
  int max_dfa_states = 0;
};

struct SymSolution {
  LcsSystemPtr sys;
  Limits limits;
  int declared_rank = 0;
  int normalized_rank = 0;
  int favored = 0;
  SymbolicRegion as_winner0;
  SymbolicRegion as_winner1;
  SymbolicRegion both_wpp;
  std::unique_ptr<SymCertNode> c_node;
  std::unique_ptr<SymCertNode> d_node;
  SymSolveMetrics metrics;

  const SymbolicRegion& as_favored() const { return favored == 0 ? as_winner0 : as_winner1; }
  const SymbolicRegion& as_opponent() const { return favored == 0 ? as_winner1 : as_winner0; }
};

std::pair<SymbolicRegion, std::unique_ptr<SymCertNode>> sym_cn(
    const LcsSystemPtr& sys, int n, const SymbolicRegion& restriction, const Limits& limits = {});
std::pair<SymbolicRegion, std::unique_ptr<SymCertNode>> sym_dn(
    const LcsSystemPtr& sys, int n, const SymbolicRegion& restriction, const Limits& limits = {});

SymSolution sym_solve(const LcsSystemPtr& sys, const Limits& limits = {});

// Which of the three partition classes a config falls in: 0/1 for the
// almost-sure regions, 2 for both-positive.
int classify_config(const SymSolution& sol, const ConcreteConfig& cfg);

// One memoryless-strategy move for the winning owner of a phase-1 config,
// answered from the certificate tree by membership queries. Deterministic:
// the first successor in transition order that lands in the required set.
ConcreteConfig strategy_step(const SymSolution& sol, const ConcreteConfig& cfg);

// Result bundle on disk: system.lcs + solution.json + certificate.json.
void save_solution(const SymSolution& sol, const std::string& dir);
SymSolution load_solution(const std::string& dir);

// All force certificates appearing in the tree (main and color-target ones).
std::vector<const SymForceCertificate*> collect_force_certs(const SymCertNode* node);

}  // namespace sgps
