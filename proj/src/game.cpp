#include "sgps/game.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

namespace sgps {

namespace {

std::uint64_t next_uid() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

}  // namespace

Region Region::empty(const GameGraph& g) {
  Region r;
  r.uid_ = g.uid();
  r.size_ = g.num_states();
  r.words_.assign((r.size_ + 63) / 64, 0);
  return r;
}

Region Region::full(const GameGraph& g) {
  Region r = empty(g);
  for (int s = 0; s < r.size_; ++s) r.set(s);
  return r;
}

Region Region::of(const GameGraph& g, const std::vector<int>& ids) {
  Region r = empty(g);
  for (int s : ids) {
    if (s < 0 || s >= r.size_) throw SgpsError(ErrorKind::invalid_input, "state id out of range");
    r.set(s);
  }
  return r;
}

int Region::count() const {
  int c = 0;
  for (std::uint64_t w : words_) c += __builtin_popcountll(w);
  return c;
}

bool Region::none() const {
  for (std::uint64_t w : words_)
    if (w) return false;
  return true;
}

std::vector<int> Region::ids() const {
  std::vector<int> out;
  for (int s = 0; s < size_; ++s)
    if (test(s)) out.push_back(s);
  return out;
}

void Region::check_compatible(const Region& o) const {
  if (uid_ != o.uid_)
    throw SgpsError(ErrorKind::invalid_input, "region universe mismatch");
}

Region& Region::operator|=(const Region& o) {
  check_compatible(o);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

Region& Region::operator&=(const Region& o) {
  check_compatible(o);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

Region& Region::subtract(const Region& o) {
  check_compatible(o);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

bool Region::operator==(const Region& o) const {
  return uid_ == o.uid_ && words_ == o.words_;
}

bool Region::subset_of(const Region& o) const {
  check_compatible(o);
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

int GameGraph::max_color() const {
  int m = -1;
  for (int c : colors_) m = std::max(m, c);
  return m;
}

int GameGraph::state_index(const std::string& name) const {
  for (int s = 0; s < num_states(); ++s)
    if (names_[s] == name) return s;
  return -1;
}

int GameBuilder::add_state(std::string name, Owner owner, int color) {
  owners_.push_back(owner);
  colors_.push_back(color);
  names_.push_back(std::move(name));
  succ_.emplace_back();
  probs_.emplace_back();
  return int(owners_.size()) - 1;
}

void GameBuilder::add_edge(int from, int to) {
  succ_[from].push_back(to);
}

void GameBuilder::add_prob_edge(int from, int to, double p) {
  succ_[from].push_back(to);
  probs_[from].push_back(p);
}

GameGraph GameBuilder::finalize() {
  GameGraph g;
  g.owners_ = owners_;
  g.colors_ = colors_;
  g.names_ = names_;
  g.succ_ = succ_;
  g.probs_ = probs_;
  g.rank_ = rank_;
  g.uid_ = next_uid();
  g.pred_.assign(g.num_states(), {});
  for (int s = 0; s < g.num_states(); ++s)
    for (int t : g.succ_[s]) g.pred_[t].push_back(s);
  return g;
}

std::vector<Violation> validate(const GameGraph& g) {
  std::vector<Violation> out;
  for (int s = 0; s < g.num_states(); ++s) {
    const auto& succ = g.successors(s);
    if (succ.empty()) out.push_back({"sink", s, g.name(s) + " has no outgoing edge"});
    std::set<int> seen;
    for (int t : succ)
      if (!seen.insert(t).second) {
        out.push_back({"duplicate-edge", s, g.name(s) + " has a duplicate edge"});
        break;
      }
    if (g.color(s) < 0 || g.color(s) > g.rank())
      out.push_back({"color-range", s, g.name(s) + " has color outside 0..rank"});
    if (g.owner(s) == Owner::Random) {
      const auto& probs = g.probabilities(s);
      if (probs.size() != succ.size()) {
        out.push_back({"prob-edge-mismatch", s, g.name(s) + " has edges without probabilities"});
        continue;
      }
      double sum = 0;
      bool positive = true;
      for (double p : probs) {
        if (!(p > 0)) positive = false;
        sum += p;
      }
      if (!positive) out.push_back({"prob-positive", s, g.name(s) + " has a non-positive probability"});
      if (!succ.empty() && std::abs(sum - 1.0) > 1e-9)
        out.push_back({"prob-sum", s, g.name(s) + " probabilities sum to " + std::to_string(sum)});
    } else if (!g.probabilities(s).empty()) {
      out.push_back({"prob-edge-mismatch", s, g.name(s) + " carries probabilities but is not random"});
    }
  }
  return out;
}

void require_valid(const GameGraph& g) {
  auto violations = validate(g);
  if (!violations.empty())
    throw SgpsError(ErrorKind::invalid_input,
                    "invalid game: " + violations.front().rule + ": " + violations.front().message);
}

namespace {

void check_region(const GameGraph& g, const Region& q) {
  if (q.universe_uid() != g.uid())
    throw SgpsError(ErrorKind::invalid_input, "region universe mismatch");
}

}  // namespace

Region post(const GameGraph& g, const Region& q) {
  check_region(g, q);
  Region r = Region::empty(g);
  for (int s = 0; s < g.num_states(); ++s)
    if (q.test(s))
      for (int t : g.successors(s)) r.set(t);
  return r;
}

Region pre_exists(const GameGraph& g, const Region& q) {
  check_region(g, q);
  Region r = Region::empty(g);
  for (int s = 0; s < g.num_states(); ++s)
    if (q.test(s))
      for (int p : g.predecessors(s)) r.set(p);
  return r;
}

Region pre_forall(const GameGraph& g, const Region& q) {
  // Dual of pre_exists by definition: states whose successors all lie in q.
  return complement(g, pre_exists(g, complement(g, q)));
}

Region complement(const GameGraph& g, const Region& q) {
  check_region(g, q);
  Region r = Region::full(g);
  r.subtract(q);
  return r;
}

bool is_sink_free(const GameGraph& g, const Region& q) {
  check_region(g, q);
  for (int s = 0; s < g.num_states(); ++s) {
    if (!q.test(s)) continue;
    bool inside = false;
    for (int t : g.successors(s))
      if (q.test(t)) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

bool is_closable(const GameGraph& g, const Region& q) {
  if (!is_sink_free(g, q)) return false;
  for (int s = 0; s < g.num_states(); ++s) {
    if (!q.test(s) || g.owner(s) != Owner::Random) continue;
    for (int t : g.successors(s))
      if (!q.test(t)) return false;
  }
  return true;
}

bool is_trap(const GameGraph& g, int player, const Region& q) {
  if (!is_closable(g, q)) return false;
  Owner po = player_owner(player);
  for (int s = 0; s < g.num_states(); ++s) {
    if (!q.test(s) || g.owner(s) != po) continue;
    for (int t : g.successors(s))
      if (!q.test(t)) return false;
  }
  return true;
}

Subgame subgame(const GameGraph& g, const Region& removed) {
  check_region(g, removed);
  Region kept = complement(g, removed);
  if (!is_closable(g, kept))
    throw SgpsError(ErrorKind::invalid_input, "not-closable: subgame complement must be closable");

  Subgame out;
  out.old_to_new.assign(g.num_states(), -1);
  GameBuilder b;
  b.set_rank(g.rank());
  for (int s = 0; s < g.num_states(); ++s) {
    if (!kept.test(s)) continue;
    out.old_to_new[s] = b.add_state(g.name(s), g.owner(s), g.color(s));
    out.new_to_old.push_back(s);
  }
  for (int s = 0; s < g.num_states(); ++s) {
    if (!kept.test(s)) continue;
    int ns = out.old_to_new[s];
    const auto& succ = g.successors(s);
    const auto& probs = g.probabilities(s);
    for (size_t i = 0; i < succ.size(); ++i) {
      if (!kept.test(succ[i])) continue;
      if (g.owner(s) == Owner::Random)
        b.add_prob_edge(ns, out.old_to_new[succ[i]], probs[i]);
      else
        b.add_edge(ns, out.old_to_new[succ[i]]);
    }
  }
  out.graph = b.finalize();
  return out;
}

Region lift_region(const GameGraph& parent, const Subgame& sub, const Region& q) {
  if (q.universe_uid() != sub.graph.uid())
    throw SgpsError(ErrorKind::invalid_input, "region universe mismatch");
  Region r = Region::empty(parent);
  for (int s = 0; s < sub.graph.num_states(); ++s)
    if (q.test(s)) r.set(sub.new_to_old[s]);
  return r;
}

MemorylessStrategy empty_strategy(const GameGraph& g, int player) {
  MemorylessStrategy f;
  f.player = player;
  f.graph_uid = g.uid();
  f.choice.assign(g.num_states(), -1);
  return f;
}

void require_consistent(const GameGraph& g, const MemorylessStrategy& f) {
  if (f.graph_uid != g.uid())
    throw SgpsError(ErrorKind::invalid_input, "strategy universe mismatch");
  for (int s = 0; s < g.num_states(); ++s) {
    if (f.choice[s] < 0) continue;
    if (g.owner(s) != player_owner(f.player))
      throw SgpsError(ErrorKind::internal, "strategy defined on a state the player does not own");
    const auto& succ = g.successors(s);
    if (std::find(succ.begin(), succ.end(), f.choice[s]) == succ.end())
      throw SgpsError(ErrorKind::internal, "strategy choice is not a structural successor");
  }
}

}  // namespace sgps
