#pragma once

#include <map>

#include "nlohmann/json_fwd.hpp"
#include "sgps/automaton.hpp"
#include "sgps/lcs.hpp"

namespace sgps {

// Symbols 0..M-1 are the system's messages in declaration order; symbol M is
// the channel separator. A channel valuation (w_1,..,w_K) is encoded as
// w_1 # w_2 # .. # w_K, so every well-shaped word has exactly K-1 separators.
int separator_symbol(const LcsSystem& sys);
Word encode_channels(const LcsSystem& sys, const std::vector<std::string>& channels);
// All words with exactly K-1 separators.
Dfa shape_dfa(const LcsSystem& sys);

// A set of game states of the induced (infinite) game: per (control, phase)
// slot, a canonical DFA over channel valuations. Absent slot = empty there.
class SymbolicRegion {
 public:
  SymbolicRegion() = default;
  explicit SymbolicRegion(LcsSystemPtr sys) : sys_(std::move(sys)) {}

  const LcsSystemPtr& system() const { return sys_; }
  const std::map<std::pair<int, int>, Dfa>& slots() const { return slots_; }
  const Dfa* slot(int ctrl, int phase) const;
  // Drops d when it denotes the empty language.
  void set_slot(int ctrl, int phase, Dfa d);

  bool operator==(const SymbolicRegion& o) const {
    return sys_ == o.sys_ && slots_ == o.slots_;
  }
  bool operator!=(const SymbolicRegion& o) const { return !(*this == o); }

 private:
  LcsSystemPtr sys_;
  std::map<std::pair<int, int>, Dfa> slots_;
};

SymbolicRegion sym_empty(LcsSystemPtr sys);
SymbolicRegion sym_full(LcsSystemPtr sys);
SymbolicRegion sym_from_literals(LcsSystemPtr sys, const std::vector<ConcreteConfig>& configs,
                                 int dfa_cap = Limits().dfa_cap);

SymbolicRegion sym_union(const SymbolicRegion& a, const SymbolicRegion& b,
                         int dfa_cap = Limits().dfa_cap);
SymbolicRegion sym_intersect(const SymbolicRegion& a, const SymbolicRegion& b,
                             int dfa_cap = Limits().dfa_cap);
SymbolicRegion sym_minus(const SymbolicRegion& a, const SymbolicRegion& b,
                         int dfa_cap = Limits().dfa_cap);
// Complement relative to the shape language at every slot of the system.
SymbolicRegion sym_complement(const SymbolicRegion& a, int dfa_cap = Limits().dfa_cap);

bool sym_is_empty(const SymbolicRegion& a);
bool sym_equals(const SymbolicRegion& a, const SymbolicRegion& b);
bool sym_subset(const SymbolicRegion& a, const SymbolicRegion& b,
                int dfa_cap = Limits().dfa_cap);
bool sym_member(const SymbolicRegion& a, const ConcreteConfig& cfg);

// Slot filters by game-state kind: phase 0 is random, phase 1 belongs to the
// control state's owner.
SymbolicRegion sym_random_part(const SymbolicRegion& a);
SymbolicRegion sym_player_part(const SymbolicRegion& a, int player);

// Largest control-state color among nonempty slots, -1 if the region is empty.
int sym_max_color(const SymbolicRegion& a);

// Per-channel-section superword closure: accepts y iff some accepted x is a
// channel-wise subword of y. Realized by message self-loops on every state.
SymbolicRegion up_closure(const SymbolicRegion& a, int dfa_cap = Limits().dfa_cap);

// One-step predecessor sets per edge kind of the induced game.
SymbolicRegion pre_transition(const SymbolicRegion& a, int transition,
                              int dfa_cap = Limits().dfa_cap);
SymbolicRegion pre_loss(const SymbolicRegion& a, int dfa_cap = Limits().dfa_cap);
// Phase-1 valuations where no transition of the control state is enabled.
SymbolicRegion deadlock_set(LcsSystemPtr sys, int dfa_cap = Limits().dfa_cap);
SymbolicRegion pre_fallback(const SymbolicRegion& a, int dfa_cap = Limits().dfa_cap);

// Predecessors within the subgame `restriction` (complement of removals):
// pre_exists = some in-subgame successor in `a`, pre_forall = all of them.
SymbolicRegion pre_exists_sym(const SymbolicRegion& a, const SymbolicRegion& restriction,
                              int dfa_cap = Limits().dfa_cap);
SymbolicRegion pre_forall_sym(const SymbolicRegion& a, const SymbolicRegion& restriction,
                              int dfa_cap = Limits().dfa_cap);

nlohmann::json dfa_to_json(const LcsSystem& sys, const Dfa& d);
Dfa dfa_from_json(const LcsSystem& sys, const nlohmann::json& j);
nlohmann::json region_to_json(const SymbolicRegion& r);
SymbolicRegion region_from_json(LcsSystemPtr sys, const nlohmann::json& j);

}  // namespace sgps
