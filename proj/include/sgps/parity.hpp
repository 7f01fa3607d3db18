#pragma once

#include <memory>

#include "sgps/reach.hpp"

namespace sgps {

// One node of the recursion tree behind a parity solve. All regions are in
// the node's own id space; `to_parent` maps those ids back one level up.
struct ParityCertNode {
  char kind = 'C';  // 'C': almost-sure winning for `favored`; 'D': positive
  int n = 0;        // rank used at this node (after normalization)
  int favored = 0;  // n mod 2
  GameGraph graph;
  std::vector<int> to_parent;

  struct Iteration {
    Region main;                 // X_i ('C') or U_i ('D')
    ForceCertificate main_cert;  // the force computation producing `main`
    Region zset;                 // Z_i lifted into node ids ('C' only)
    ForceCertificate z_cert;     // lifted into node ids ('C' only)
    Region part;                 // recursive contribution, lifted
    Region combined;             // Y_i ('C') or V_i ('D')
    std::unique_ptr<ParityCertNode> child;
  };
  std::vector<Iteration> iterations;
  Region result;
};

struct ParityPartition {
  int favored = 0;  // x = normalized rank mod 2
  Region as_winner0;
  Region as_winner1;
  Region both_wpp;
  // The four winning strategies: c_* certify the almost-sure split,
  // d_* the positive-probability split.
  MemorylessStrategy c_favored;
  MemorylessStrategy c_opponent;
  MemorylessStrategy d_favored;
  MemorylessStrategy d_opponent;
};

struct ParityCertificate {
  int declared_rank = 0;    // rank carried by the input graph
  int normalized_rank = 0;  // max color actually present
  int favored = 0;
  std::unique_ptr<ParityCertNode> c_node;
  std::unique_ptr<ParityCertNode> d_node;
};

struct ParitySolution {
  ParityPartition partition;
  ParityCertificate certificate;
};

// Almost-sure winning set of player (n mod 2) on a game of rank at most n.
std::pair<Region, std::unique_ptr<ParityCertNode>> cn(const GameGraph& g, int n);
// Positive-probability winning set of player (n mod 2).
std::pair<Region, std::unique_ptr<ParityCertNode>> dn(const GameGraph& g, int n);

ParitySolution solve_parity(const GameGraph& g);

}  // namespace sgps
