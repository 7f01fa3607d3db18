#include "sgps/reach.hpp"

namespace sgps {

ForceCertificate force_set(const GameGraph& g, int player, const Region& target) {
  if (target.universe_uid() != g.uid())
    throw SgpsError(ErrorKind::invalid_input, "region universe mismatch");

  ForceCertificate cert;
  cert.player = player;
  cert.target = target;
  Owner mine = player_owner(player);
  Owner theirs = player_owner(opponent(player));

  Region cur = target;
  cert.layers.push_back(cur);

  // outside[s]: successors of the opponent state s not yet swept by the
  // rounds below. Starts at the full out-degree; the first round sweeps the
  // target itself, so after round i the counter equals |Post(s) - R_i|.
  std::vector<int> outside(g.num_states(), 0);
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner(s) == theirs) outside[s] = int(g.successors(s).size());

  std::vector<int> frontier = cur.ids();
  while (!frontier.empty()) {
    Region added = Region::empty(g);
    for (int s : frontier) {
      for (int p : g.predecessors(s)) {
        if (cur.test(p) || added.test(p)) {
          if (g.owner(p) == theirs) --outside[p];  // still track entering succ
          continue;
        }
        Owner o = g.owner(p);
        if (o == mine || o == Owner::Random) {
          added.set(p);
        } else {
          if (--outside[p] == 0) added.set(p);
        }
      }
    }
    if (added.none()) break;
    frontier = added.ids();
    cur |= added;
    cert.layers.push_back(cur);
  }

  cert.force = cur;
  cert.avoid = complement(g, cur);
  return cert;
}

MemorylessStrategy force_strategy(const GameGraph& g, const ForceCertificate& cert) {
  MemorylessStrategy f = empty_strategy(g, cert.player);
  Owner mine = player_owner(cert.player);
  for (int s = 0; s < g.num_states(); ++s) {
    if (g.owner(s) != mine || !cert.force.test(s) || cert.target.test(s)) continue;
    int layer = cert.layer_of(s);
    const Region& below = cert.layers[layer - 1];
    int best = -1;
    for (int t : g.successors(s))
      if (below.test(t) && (best < 0 || t < best)) best = t;
    if (best < 0)
      throw SgpsError(ErrorKind::internal, "force layer without a lower-layer successor");
    f.choice[s] = best;
  }
  return f;
}

MemorylessStrategy avoid_strategy(const GameGraph& g, const ForceCertificate& cert) {
  MemorylessStrategy f = empty_strategy(g, opponent(cert.player));
  Owner theirs = player_owner(opponent(cert.player));
  for (int s = 0; s < g.num_states(); ++s) {
    if (g.owner(s) != theirs || !cert.avoid.test(s)) continue;
    int best = -1;
    for (int t : g.successors(s))
      if (cert.avoid.test(t) && (best < 0 || t < best)) best = t;
    if (best < 0)
      throw SgpsError(ErrorKind::internal, "avoid set is not a trap");
    f.choice[s] = best;
  }
  return f;
}

}  // namespace sgps
