#include "sgps/parity.hpp"

#include <algorithm>

namespace sgps {

namespace {

struct NodeResult {
  Region region;
  MemorylessStrategy win;  // favored player, defined on `region`
  MemorylessStrategy opp;  // opponent, defined on the complement
  std::unique_ptr<ParityCertNode> cert;
};

NodeResult cn_impl(const GameGraph& g, int n);
NodeResult dn_impl(const GameGraph& g, int n);

// Rank used for a recursive call that must favor `player`: the largest color
// present, bumped by one when its parity does not match. Subgames shed
// colors, so this keeps the recursion shallow without changing the sets.
int rank_for_player(const GameGraph& g, int player) {
  int m = std::max(g.max_color(), 0);
  return (m % 2 == player) ? m : m + 1;
}

NodeResult cn_for_player(const GameGraph& g, int player) {
  return cn_impl(g, rank_for_player(g, player));
}

NodeResult dn_for_player(const GameGraph& g, int player) {
  return dn_impl(g, rank_for_player(g, player));
}

// Every owned state steered to its smallest in-graph successor; used at rank
// 0 where staying inside the (sub)game is all a winning strategy needs.
MemorylessStrategy stay_inside_strategy(const GameGraph& g, int player) {
  MemorylessStrategy f = empty_strategy(g, player);
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner(s) == player_owner(player))
      f.choice[s] = *std::min_element(g.successors(s).begin(), g.successors(s).end());
  return f;
}

void merge_translated(MemorylessStrategy& into, const MemorylessStrategy& from,
                      const std::vector<int>& new_to_old) {
  for (size_t s = 0; s < from.choice.size(); ++s) {
    if (from.choice[s] < 0) continue;
    int parent = new_to_old[s];
    if (into.choice[parent] < 0) into.choice[parent] = new_to_old[from.choice[s]];
  }
}

void merge_if_undefined(MemorylessStrategy& into, const MemorylessStrategy& from) {
  for (size_t s = 0; s < from.choice.size(); ++s)
    if (from.choice[s] >= 0 && into.choice[s] < 0) into.choice[s] = from.choice[s];
}

std::vector<int> compose_maps(const std::vector<int>& outer, const std::vector<int>& inner) {
  std::vector<int> out(inner.size());
  for (size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

ForceCertificate lift_force_cert(const GameGraph& parent, const Subgame& sub,
                                 const ForceCertificate& cert) {
  ForceCertificate out;
  out.player = cert.player;
  out.target = lift_region(parent, sub, cert.target);
  out.force = lift_region(parent, sub, cert.force);
  out.avoid = lift_region(parent, sub, cert.avoid);
  for (const Region& layer : cert.layers) out.layers.push_back(lift_region(parent, sub, layer));
  return out;
}

std::unique_ptr<ParityCertNode> leaf_node(char kind, int n, const GameGraph& g,
                                          const Region& result) {
  auto node = std::make_unique<ParityCertNode>();
  node->kind = kind;
  node->n = n;
  node->favored = n % 2;
  node->graph = g;
  node->result = result;
  return node;
}

void check_rank(const GameGraph& g, int n) {
  if (g.max_color() > n) throw SgpsError(ErrorKind::invalid_input, "rank-mismatch");
  if (n < 0) throw SgpsError(ErrorKind::invalid_input, "rank-mismatch");
}

NodeResult cn_impl(const GameGraph& g, int n) {
  check_rank(g, n);
  int x = n % 2;

  if (g.num_states() == 0 || n == 0) {
    NodeResult res;
    res.region = g.num_states() > 0 ? Region::full(g) : Region::empty(g);
    res.win = g.num_states() > 0 ? stay_inside_strategy(g, x) : empty_strategy(g, x);
    res.opp = empty_strategy(g, opponent(x));
    res.cert = leaf_node('C', n, g, res.region);
    return res;
  }

  struct IterWork {
    ForceCertificate fx;       // X_i force computation (in g)
    Subgame sub1;              // g minus X_i
    ForceCertificate fz;       // Z_i force computation (in sub1 ids)
    Subgame sub2;              // sub1 minus Z_i
    std::vector<int> to_g;     // sub2 ids -> g ids
    NodeResult child;          // D_{n-1} on sub2
    Region y;                  // Y_i in g
  };
  std::vector<IterWork> iters;

  Region y_union = Region::empty(g);
  int guard = g.num_states() + 2;
  for (int i = 0;; ++i) {
    if (i > guard) throw SgpsError(ErrorKind::internal, "parity outer loop failed to converge");
    IterWork it;
    it.fx = force_set(g, opponent(x), y_union);
    it.sub1 = subgame(g, it.fx.force);

    std::vector<int> color_n;
    for (int s = 0; s < it.sub1.graph.num_states(); ++s)
      if (it.sub1.graph.color(s) == n) color_n.push_back(s);
    it.fz = force_set(it.sub1.graph, x, Region::of(it.sub1.graph, color_n));
    it.sub2 = subgame(it.sub1.graph, it.fz.force);
    it.to_g = compose_maps(it.sub1.new_to_old, it.sub2.new_to_old);

    it.child = dn_for_player(it.sub2.graph, opponent(x));

    it.y = it.fx.force;
    for (int s = 0; s < it.sub2.graph.num_states(); ++s)
      if (it.child.region.test(s)) it.y.set(it.to_g[s]);

    bool converged = (it.y == it.fx.force);
    y_union = it.y;
    iters.push_back(std::move(it));
    if (converged) break;
  }

  const IterWork& last = iters.back();
  if (!last.child.region.none())
    throw SgpsError(ErrorKind::internal, "stabilized parity level keeps a nonempty subresult");

  NodeResult res;
  res.region = complement(g, last.fx.force);

  // Favored player: stitch the three partitions of the winning region.
  res.win = empty_strategy(g, x);
  merge_translated(res.win, last.child.opp, last.to_g);
  MemorylessStrategy z_strat = force_strategy(last.sub1.graph, last.fz);
  merge_translated(res.win, z_strat, last.sub1.new_to_old);
  for (int s = 0; s < g.num_states(); ++s) {
    if (g.owner(s) != player_owner(x) || !res.region.test(s)) continue;
    if (res.win.choice[s] >= 0 || g.color(s) != n) continue;
    int best = -1;
    for (int t : g.successors(s))
      if (res.region.test(t) && (best < 0 || t < best)) best = t;
    if (best < 0) throw SgpsError(ErrorKind::internal, "winning region is not a trap");
    res.win.choice[s] = best;
  }

  // Opponent: first matching level wins (the sets are nested, so merging in
  // order realizes the smallest-level rule).
  res.opp = empty_strategy(g, opponent(x));
  for (const IterWork& it : iters) {
    merge_if_undefined(res.opp, force_strategy(g, it.fx));
    merge_translated(res.opp, it.child.win, it.to_g);
  }

  auto node = std::make_unique<ParityCertNode>();
  node->kind = 'C';
  node->n = n;
  node->favored = x;
  node->graph = g;
  node->result = res.region;
  for (IterWork& it : iters) {
    ParityCertNode::Iteration out;
    out.main = it.fx.force;
    out.main_cert = it.fx;
    out.zset = lift_region(g, it.sub1, it.fz.force);
    out.z_cert = lift_force_cert(g, it.sub1, it.fz);
    out.part = Region::empty(g);
    for (int s = 0; s < it.sub2.graph.num_states(); ++s)
      if (it.child.region.test(s)) out.part.set(it.to_g[s]);
    out.combined = it.y;
    out.child = std::move(it.child.cert);
    out.child->to_parent = it.to_g;  // relative to this node's graph
    node->iterations.push_back(std::move(out));
  }
  res.cert = std::move(node);
  return res;
}

NodeResult dn_impl(const GameGraph& g, int n) {
  check_rank(g, n);
  int x = n % 2;

  if (g.num_states() == 0 || n == 0) {
    NodeResult res;
    res.region = g.num_states() > 0 ? Region::full(g) : Region::empty(g);
    res.win = g.num_states() > 0 ? stay_inside_strategy(g, x) : empty_strategy(g, x);
    res.opp = empty_strategy(g, opponent(x));
    res.cert = leaf_node('D', n, g, res.region);
    return res;
  }

  struct IterWork {
    ForceCertificate fu;
    Subgame sub;
    NodeResult child;  // C_n on g minus U_i
    Region v;
  };
  std::vector<IterWork> iters;

  Region v_union = Region::empty(g);
  int guard = g.num_states() + 2;
  for (int i = 0;; ++i) {
    if (i > guard) throw SgpsError(ErrorKind::internal, "parity outer loop failed to converge");
    IterWork it;
    it.fu = force_set(g, x, v_union);
    it.sub = subgame(g, it.fu.force);
    it.child = cn_for_player(it.sub.graph, x);
    it.v = it.fu.force;
    for (int s = 0; s < it.sub.graph.num_states(); ++s)
      if (it.child.region.test(s)) it.v.set(it.sub.new_to_old[s]);
    bool converged = (it.v == it.fu.force);
    v_union = it.v;
    iters.push_back(std::move(it));
    if (converged) break;
  }

  const IterWork& last = iters.back();
  if (!last.child.region.none())
    throw SgpsError(ErrorKind::internal, "stabilized parity level keeps a nonempty subresult");

  NodeResult res;
  res.region = last.fu.force;

  res.win = empty_strategy(g, x);
  for (const IterWork& it : iters) {
    merge_if_undefined(res.win, force_strategy(g, it.fu));
    merge_translated(res.win, it.child.win, it.sub.new_to_old);
  }

  // The final level solved the whole remaining subgame for the opponent.
  res.opp = empty_strategy(g, opponent(x));
  merge_translated(res.opp, last.child.opp, last.sub.new_to_old);

  auto node = std::make_unique<ParityCertNode>();
  node->kind = 'D';
  node->n = n;
  node->favored = x;
  node->graph = g;
  node->result = res.region;
  for (IterWork& it : iters) {
    ParityCertNode::Iteration out;
    out.main = it.fu.force;
    out.main_cert = it.fu;
    out.part = Region::empty(g);
    for (int s = 0; s < it.sub.graph.num_states(); ++s)
      if (it.child.region.test(s)) out.part.set(it.sub.new_to_old[s]);
    out.combined = it.v;
    out.child = std::move(it.child.cert);
    out.child->to_parent = it.sub.new_to_old;
    node->iterations.push_back(std::move(out));
  }
  res.cert = std::move(node);
  return res;
}

}  // namespace

std::pair<Region, std::unique_ptr<ParityCertNode>> cn(const GameGraph& g, int n) {
  NodeResult res = cn_impl(g, n);
  return {res.region, std::move(res.cert)};
}

std::pair<Region, std::unique_ptr<ParityCertNode>> dn(const GameGraph& g, int n) {
  NodeResult res = dn_impl(g, n);
  return {res.region, std::move(res.cert)};
}

ParitySolution solve_parity(const GameGraph& g) {
  require_valid(g);

  ParitySolution out;
  int n = std::max(g.max_color(), 0);
  int x = n % 2;
  out.certificate.declared_rank = g.rank();
  out.certificate.normalized_rank = n;
  out.certificate.favored = x;
  out.partition.favored = x;

  NodeResult c = cn_impl(g, n);
  NodeResult d = dn_impl(g, n);
  if (!c.region.subset_of(d.region))
    throw SgpsError(ErrorKind::internal, "almost-sure region exceeds the positive region");

  Region as_x = c.region;
  Region as_opp = complement(g, d.region);
  Region both = d.region;
  both.subtract(c.region);

  out.partition.as_winner0 = (x == 0) ? as_x : as_opp;
  out.partition.as_winner1 = (x == 0) ? as_opp : as_x;
  out.partition.both_wpp = both;
  out.partition.c_favored = c.win;
  out.partition.c_opponent = c.opp;
  out.partition.d_favored = d.win;
  out.partition.d_opponent = d.opp;
  require_consistent(g, out.partition.c_favored);
  require_consistent(g, out.partition.c_opponent);
  require_consistent(g, out.partition.d_favored);
  require_consistent(g, out.partition.d_opponent);

  out.certificate.c_node = std::move(c.cert);
  out.certificate.d_node = std::move(d.cert);
  return out;
}

}  // namespace sgps
