#pragma once

#include <vector>

#include "sgps/common.hpp"

namespace sgps {

using Symbol = int;
using Word = std::vector<Symbol>;

struct Nfa {
  int alphabet_size = 0;
  std::vector<int> initial;
  std::vector<bool> accepting;
  // delta[state][symbol] -> target list (epsilon-free)
  std::vector<std::vector<std::vector<int>>> delta;

  int num_states() const { return int(accepting.size()); }
  int add_state() {
    accepting.push_back(false);
    delta.emplace_back(alphabet_size);
    return num_states() - 1;
  }
  void add_transition(int from, Symbol a, int to) { delta[from][a].push_back(to); }
};

// Deterministic automaton in canonical form: trimmed to useful states,
// minimal, and BFS-numbered from the initial state (id 0) with symbols
// visited in ascending order. Structural equality is language equality.
// The empty language is the automaton with no states.
struct Dfa {
  int alphabet_size = 0;
  std::vector<std::vector<int>> delta;  // [state][symbol] -> state or -1
  std::vector<bool> accepting;

  int num_states() const { return int(accepting.size()); }
  bool empty_language() const { return num_states() == 0; }
  bool accepts(const Word& word) const;
  bool operator==(const Dfa& o) const {
    return alphabet_size == o.alphabet_size && delta == o.delta && accepting == o.accepting;
  }
  bool operator!=(const Dfa& o) const { return !(*this == o); }
};

// Subset construction; result states are reachable subsets only.
Dfa determinize(const Nfa& nfa, int state_cap);

// Hopcroft minimization plus trimming and canonical renumbering.
Dfa minimize_trim(const Dfa& dfa);

inline Dfa canonical_dfa(const Nfa& nfa, int state_cap) {
  return minimize_trim(determinize(nfa, state_cap));
}

Nfa nfa_of(const Dfa& dfa);

Dfa dfa_union(const Dfa& a, const Dfa& b, int state_cap);
Dfa dfa_intersect(const Dfa& a, const Dfa& b, int state_cap);
Dfa dfa_difference(const Dfa& a, const Dfa& b, int state_cap);

Dfa dfa_from_word(int alphabet_size, const Word& word);

}  // namespace sgps
