#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgps/common.hpp"

namespace sgps {

enum class Owner : std::uint8_t { P0 = 0, P1 = 1, Random = 2 };

inline Owner player_owner(int player) { return player == 0 ? Owner::P0 : Owner::P1; }
inline int opponent(int player) { return 1 - player; }

class GameGraph;

// A set of states of one particular GameGraph. The owning graph is tracked by
// uid so that mixing regions of different graphs fails loudly.
class Region {
 public:
  Region() = default;

  static Region empty(const GameGraph& g);
  static Region full(const GameGraph& g);
  static Region of(const GameGraph& g, const std::vector<int>& ids);

  bool test(int s) const { return (words_[s >> 6] >> (s & 63)) & 1; }
  void set(int s) { words_[s >> 6] |= std::uint64_t(1) << (s & 63); }
  void reset(int s) { words_[s >> 6] &= ~(std::uint64_t(1) << (s & 63)); }

  int size() const { return size_; }
  std::uint64_t universe_uid() const { return uid_; }
  int count() const;
  bool none() const;
  std::vector<int> ids() const;

  Region& operator|=(const Region& o);
  Region& operator&=(const Region& o);
  Region& subtract(const Region& o);

  bool operator==(const Region& o) const;
  bool operator!=(const Region& o) const { return !(*this == o); }
  bool subset_of(const Region& o) const;

 private:
  friend Region complement(const GameGraph&, const Region&);
  void check_compatible(const Region& o) const;

  std::uint64_t uid_ = 0;
  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Explicit finite 2.5-player parity game. Immutable once built; construct
// through GameBuilder.
class GameGraph {
 public:
  int num_states() const { return int(owners_.size()); }
  Owner owner(int s) const { return owners_[s]; }
  int color(int s) const { return colors_[s]; }
  int rank() const { return rank_; }
  // Largest color actually present; -1 on the empty game.
  int max_color() const;

  const std::vector<int>& successors(int s) const { return succ_[s]; }
  const std::vector<int>& predecessors(int s) const { return pred_[s]; }
  // Parallel to successors(s); empty for non-Random states.
  const std::vector<double>& probabilities(int s) const { return probs_[s]; }

  const std::string& name(int s) const { return names_[s]; }
  int state_index(const std::string& name) const;  // -1 if unknown

  std::uint64_t uid() const { return uid_; }

 private:
  friend class GameBuilder;
  std::vector<Owner> owners_;
  std::vector<int> colors_;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<int>> pred_;
  std::vector<std::vector<double>> probs_;
  int rank_ = 0;
  std::uint64_t uid_ = 0;
};

class GameBuilder {
 public:
  void set_rank(int rank) { rank_ = rank; }
  int add_state(std::string name, Owner owner, int color);
  void add_edge(int from, int to);
  void add_prob_edge(int from, int to, double p);
  int num_states() const { return int(owners_.size()); }
  GameGraph finalize();

 private:
  std::vector<Owner> owners_;
  std::vector<int> colors_;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<double>> probs_;
  int rank_ = 0;
};

struct Violation {
  std::string rule;  // "sink", "prob-sum", "prob-positive", "prob-edge-mismatch",
                     // "color-range", "duplicate-edge"
  int state = -1;
  std::string message;
};

// Reports every broken graph invariant; empty result means the game is valid.
std::vector<Violation> validate(const GameGraph& g);
void require_valid(const GameGraph& g);

Region post(const GameGraph& g, const Region& q);
Region pre_exists(const GameGraph& g, const Region& q);
Region pre_forall(const GameGraph& g, const Region& q);
Region complement(const GameGraph& g, const Region& q);

bool is_sink_free(const GameGraph& g, const Region& q);
bool is_closable(const GameGraph& g, const Region& q);
bool is_trap(const GameGraph& g, int player, const Region& q);

// Restriction of g to the complement of `removed`. The kept set must be
// closable (the empty result is permitted; schemes use it as a base case).
struct Subgame {
  GameGraph graph;
  std::vector<int> old_to_new;  // -1 for removed states
  std::vector<int> new_to_old;
};
Subgame subgame(const GameGraph& g, const Region& removed);

// Pull a region of the subgame back into parent-graph ids.
Region lift_region(const GameGraph& parent, const Subgame& sub, const Region& q);

// Partial memoryless strategy: choice[s] == -1 where no move is prescribed.
struct MemorylessStrategy {
  int player = 0;
  std::uint64_t graph_uid = 0;
  std::vector<int> choice;

  bool defined(int s) const { return choice[s] >= 0; }
};

MemorylessStrategy empty_strategy(const GameGraph& g, int player);
// Checks domain ownership and that every image is a structural successor.
void require_consistent(const GameGraph& g, const MemorylessStrategy& f);

// Line-based text format (see README); JSON mirror accepted for ".json" paths.
GameGraph parse_game_text(const std::string& text);
GameGraph parse_game_json(const std::string& text);
GameGraph load_game_file(const std::string& path);

}  // namespace sgps
