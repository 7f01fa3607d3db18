#include "sgps/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace sgps {

bool Dfa::accepts(const Word& word) const {
  if (empty_language()) return false;
  int q = 0;
  for (Symbol a : word) {
    q = delta[q][a];
    if (q < 0) return false;
  }
  return accepting[q];
}

Dfa determinize(const Nfa& nfa, int state_cap) {
  Dfa out;
  out.alphabet_size = nfa.alphabet_size;
  std::vector<int> start = nfa.initial;
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  if (start.empty()) return out;

  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> subset) {
    auto it = ids.find(subset);
    if (it != ids.end()) return it->second;
    int id = int(subsets.size());
    if (id >= state_cap) throw SgpsError(ErrorKind::cap_exceeded, "dfa-cap");
    ids.emplace(subset, id);
    subsets.push_back(std::move(subset));
    out.delta.emplace_back(out.alphabet_size, -1);
    bool acc = false;
    for (int q : subsets.back()) acc |= nfa.accepting[q];
    out.accepting.push_back(acc);
    return id;
  };

  intern(start);
  for (size_t id = 0; id < subsets.size(); ++id) {
    for (Symbol a = 0; a < out.alphabet_size; ++a) {
      std::vector<int> next;
      for (int q : subsets[id])
        for (int t : nfa.delta[q][a]) next.push_back(t);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.empty()) continue;
      out.delta[id][a] = intern(std::move(next));
    }
  }
  return out;
}

namespace {

// Canonical renumbering: BFS from `initial` over ascending symbols through
// `keep` states only. Returns the empty automaton when initial is dropped.
Dfa renumber(const Dfa& dfa, int initial, const std::vector<bool>& keep) {
  Dfa out;
  out.alphabet_size = dfa.alphabet_size;
  if (initial < 0 || !keep[initial]) return out;

  std::vector<int> order(dfa.num_states(), -1);
  std::vector<int> bfs{initial};
  order[initial] = 0;
  for (size_t i = 0; i < bfs.size(); ++i) {
    int q = bfs[i];
    for (Symbol a = 0; a < dfa.alphabet_size; ++a) {
      int t = dfa.delta[q][a];
      if (t < 0 || !keep[t] || order[t] >= 0) continue;
      order[t] = int(bfs.size());
      bfs.push_back(t);
    }
  }
  out.delta.assign(bfs.size(), std::vector<int>(out.alphabet_size, -1));
  out.accepting.assign(bfs.size(), false);
  for (int q : bfs) {
    int nq = order[q];
    out.accepting[nq] = dfa.accepting[q];
    for (Symbol a = 0; a < dfa.alphabet_size; ++a) {
      int t = dfa.delta[q][a];
      if (t >= 0 && keep[t]) out.delta[nq][a] = order[t];
    }
  }
  return out;
}

}  // namespace

Dfa minimize_trim(const Dfa& dfa) {
  if (dfa.num_states() == 0) return dfa;
  int n = dfa.num_states();
  int alphabet = dfa.alphabet_size;

  // Complete with a sink so refinement sees total transitions.
  int total = n + 1;
  int sink = n;
  auto step = [&](int q, Symbol a) {
    if (q == sink) return sink;
    int t = dfa.delta[q][a];
    return t < 0 ? sink : t;
  };

  std::vector<std::vector<std::vector<int>>> inv(
      alphabet, std::vector<std::vector<int>>(total));
  for (int q = 0; q < total; ++q)
    for (Symbol a = 0; a < alphabet; ++a) inv[a][step(q, a)].push_back(q);

  std::vector<int> block_of(total);
  std::vector<std::vector<int>> blocks;
  {
    std::vector<int> acc, rej;
    for (int q = 0; q < total; ++q)
      (q != sink && dfa.accepting[q] ? acc : rej).push_back(q);
    if (!acc.empty()) {
      for (int q : acc) block_of[q] = int(blocks.size());
      blocks.push_back(std::move(acc));
    }
    if (!rej.empty()) {
      for (int q : rej) block_of[q] = int(blocks.size());
      blocks.push_back(std::move(rej));
    }
  }

  std::deque<std::pair<int, Symbol>> work;
  std::vector<std::vector<char>> in_work;
  auto push_work = [&](int b, Symbol a) {
    if (!in_work[b][a]) {
      in_work[b][a] = 1;
      work.emplace_back(b, a);
    }
  };
  in_work.assign(blocks.size(), std::vector<char>(alphabet, 0));
  for (size_t b = 0; b < blocks.size(); ++b)
    for (Symbol a = 0; a < alphabet; ++a) push_work(int(b), a);

  std::vector<char> marked(total, 0);
  std::vector<int> mark_count(blocks.size(), 0);
  while (!work.empty()) {
    auto [bs, a] = work.front();
    work.pop_front();
    in_work[bs][a] = 0;

    std::vector<int> marked_states;
    std::vector<int> touched;
    for (int q : blocks[bs])
      for (int p : inv[a][q]) {
        if (marked[p]) continue;
        marked[p] = 1;
        marked_states.push_back(p);
        int b = block_of[p];
        if (mark_count[b]++ == 0) touched.push_back(b);
      }

    for (int b : touched) {
      if (mark_count[b] == int(blocks[b].size())) {
        mark_count[b] = 0;
        continue;  // whole block marked, no split
      }
      int nb = int(blocks.size());
      std::vector<int> stay, move;
      for (int q : blocks[b]) (marked[q] ? move : stay).push_back(q);
      blocks[b] = std::move(stay);
      for (int q : move) block_of[q] = nb;
      blocks.push_back(std::move(move));
      mark_count[b] = 0;
      mark_count.push_back(0);
      in_work.emplace_back(alphabet, 0);
      for (Symbol s = 0; s < alphabet; ++s) {
        if (in_work[b][s]) {
          push_work(nb, s);
        } else {
          // The smaller half suffices as a future splitter.
          push_work(blocks[b].size() <= blocks[nb].size() ? b : nb, s);
        }
      }
    }
    for (int q : marked_states) marked[q] = 0;
  }

  // Quotient automaton over blocks.
  Dfa quo;
  quo.alphabet_size = alphabet;
  quo.delta.assign(blocks.size(), std::vector<int>(alphabet, -1));
  quo.accepting.assign(blocks.size(), false);
  for (size_t b = 0; b < blocks.size(); ++b) {
    int rep = blocks[b][0];
    quo.accepting[b] = (rep != sink) && dfa.accepting[rep];
    for (Symbol a = 0; a < alphabet; ++a) quo.delta[b][a] = block_of[step(rep, a)];
  }

  // Drop states that cannot reach acceptance, then renumber canonically.
  std::vector<bool> useful(blocks.size(), false);
  std::vector<int> stack;
  std::vector<std::vector<int>> rev(blocks.size());
  for (size_t b = 0; b < blocks.size(); ++b)
    for (Symbol a = 0; a < alphabet; ++a) rev[quo.delta[b][a]].push_back(int(b));
  for (size_t b = 0; b < blocks.size(); ++b)
    if (quo.accepting[b]) {
      useful[b] = true;
      stack.push_back(int(b));
    }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : rev[q])
      if (!useful[p]) {
        useful[p] = true;
        stack.push_back(p);
      }
  }
  for (size_t b = 0; b < blocks.size(); ++b)
    for (Symbol a = 0; a < alphabet; ++a)
      if (!useful[quo.delta[b][a]]) quo.delta[b][a] = -1;

  return renumber(quo, block_of[0], useful);
}

Nfa nfa_of(const Dfa& dfa) {
  Nfa out;
  out.alphabet_size = dfa.alphabet_size;
  for (int q = 0; q < dfa.num_states(); ++q) {
    out.add_state();
    out.accepting[q] = dfa.accepting[q];
  }
  for (int q = 0; q < dfa.num_states(); ++q)
    for (Symbol a = 0; a < dfa.alphabet_size; ++a)
      if (dfa.delta[q][a] >= 0) out.add_transition(q, a, dfa.delta[q][a]);
  if (dfa.num_states() > 0) out.initial = {0};
  return out;
}

namespace {

Dfa dfa_product(const Dfa& a, const Dfa& b, bool keep_a_only, bool keep_b_only,
                bool keep_both, int state_cap) {
  int alphabet = std::max(a.alphabet_size, b.alphabet_size);
  Dfa out;
  out.alphabet_size = alphabet;
  if (a.empty_language() && b.empty_language()) return out;

  // Pair states; -1 on one side is that automaton's implicit sink.
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> pairs;
  auto accept_pair = [&](int ia, int ib) {
    bool in_a = ia >= 0 && a.accepting[ia];
    bool in_b = ib >= 0 && b.accepting[ib];
    if (in_a && in_b) return keep_both;
    if (in_a) return keep_a_only;
    if (in_b) return keep_b_only;
    return false;
  };
  auto intern = [&](int ia, int ib) {
    auto it = ids.find({ia, ib});
    if (it != ids.end()) return it->second;
    int id = int(pairs.size());
    if (id >= state_cap) throw SgpsError(ErrorKind::cap_exceeded, "dfa-cap");
    ids.emplace(std::make_pair(ia, ib), id);
    pairs.emplace_back(ia, ib);
    out.delta.emplace_back(alphabet, -1);
    out.accepting.push_back(accept_pair(ia, ib));
    return id;
  };

  intern(a.empty_language() ? -1 : 0, b.empty_language() ? -1 : 0);
  for (size_t id = 0; id < pairs.size(); ++id) {
    for (Symbol s = 0; s < alphabet; ++s) {
      auto [ia, ib] = pairs[id];
      int ta = (ia >= 0 && s < a.alphabet_size) ? a.delta[ia][s] : -1;
      int tb = (ib >= 0 && s < b.alphabet_size) ? b.delta[ib][s] : -1;
      if (ta < 0 && tb < 0) continue;  // joint sink can never accept
      out.delta[id][s] = intern(ta, tb);
    }
  }
  return minimize_trim(out);
}

}  // namespace

Dfa dfa_union(const Dfa& a, const Dfa& b, int state_cap) {
  return dfa_product(a, b, true, true, true, state_cap);
}

Dfa dfa_intersect(const Dfa& a, const Dfa& b, int state_cap) {
  return dfa_product(a, b, false, false, true, state_cap);
}

Dfa dfa_difference(const Dfa& a, const Dfa& b, int state_cap) {
  return dfa_product(a, b, true, false, false, state_cap);
}

Dfa dfa_from_word(int alphabet_size, const Word& word) {
  Dfa out;
  out.alphabet_size = alphabet_size;
  out.delta.assign(word.size() + 1, std::vector<int>(alphabet_size, -1));
  out.accepting.assign(word.size() + 1, false);
  out.accepting.back() = true;
  for (size_t i = 0; i < word.size(); ++i) out.delta[i][word[i]] = int(i) + 1;
  return out;
}

}  // namespace sgps
