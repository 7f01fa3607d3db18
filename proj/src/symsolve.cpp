#include "sgps/symsolve.hpp"

#include <filesystem>
#include <fstream>

#include "nlohmann/json.hpp"

namespace sgps {

using nlohmann::json;

namespace {

struct SolveContext {
  LcsSystemPtr sys;
  Limits limits;
  SymbolicRegion full;
  SymSolveMetrics* metrics = nullptr;

  void note_region(const SymbolicRegion& r) {
    if (!metrics) return;
    for (const auto& [key, d] : r.slots())
      metrics->max_dfa_states = std::max(metrics->max_dfa_states, d.num_states());
  }
};

SymbolicRegion color_region(const SolveContext& ctx, int color) {
  SymbolicRegion out(ctx.sys);
  Dfa shape = shape_dfa(*ctx.sys);
  for (int s = 0; s < ctx.sys->num_controls(); ++s)
    if (ctx.sys->control_color(s) == color)
      for (int phase = 0; phase <= 1; ++phase) out.set_slot(s, phase, shape);
  return out;
}

SymForceCertificate sym_force_ctx(SolveContext& ctx, int player, const SymbolicRegion& target,
                                  const SymbolicRegion& restriction) {
  if (ctx.metrics) ++ctx.metrics->force_calls;
  int cap = ctx.limits.dfa_cap;

  // Precondition: the restriction is a legal subgame domain. Sink-freeness
  // holds by construction of the callers; the random side is the part a
  // broken caller would violate, checked one symbolic step deep.
  SymbolicRegion closed = pre_forall_sym(restriction, ctx.full, cap);
  if (!sym_subset(sym_random_part(restriction), closed, cap))
    throw SgpsError(ErrorKind::invalid_input, "sym-force: restriction not closable");

  SymForceCertificate cert;
  cert.player = player;
  cert.restriction = restriction;
  cert.target = sym_intersect(target, restriction, cap);
  SymbolicRegion cur = cert.target;
  cert.layers.push_back(cur);
  for (int round = 0;; ++round) {
    if (round >= ctx.limits.iter_cap)
      throw SgpsError(ErrorKind::cap_exceeded, "termination-cap: reachability layers");
    SymbolicRegion pe = pre_exists_sym(cur, restriction, cap);
    SymbolicRegion pf = pre_forall_sym(cur, restriction, cap);
    SymbolicRegion next = sym_union(cur, sym_random_part(pe), cap);
    next = sym_union(next, sym_player_part(pe, player), cap);
    next = sym_union(next, sym_player_part(pf, opponent(player)), cap);
    if (sym_equals(next, cur)) break;
    cur = next;
    cert.layers.push_back(cur);
    ctx.note_region(cur);
  }
  cert.force = cur;
  cert.avoid = sym_minus(restriction, cur, cap);
  if (ctx.metrics)
    ctx.metrics->max_force_rounds = std::max(ctx.metrics->max_force_rounds, cert.rounds());
  return cert;
}

std::pair<SymbolicRegion, std::unique_ptr<SymCertNode>> sym_cn_ctx(
    SolveContext& ctx, int n, const SymbolicRegion& restriction);
std::pair<SymbolicRegion, std::unique_ptr<SymCertNode>> sym_dn_ctx(
    SolveContext& ctx, int n, const SymbolicRegion& restriction);

int rank_for_player(const SymbolicRegion& restriction, int player) {
  int m = std::max(sym_max_color(restriction), 0);
  return (m % 2 == player) ? m : m + 1;
}

std::unique_ptr<SymCertNode> leaf(char kind, int n, const SymbolicRegion& restriction,
                                  const SymbolicRegion& result) {
  auto node = std::make_unique<SymCertNode>();
  node->kind = kind;
  node->n = n;
  node->favored = n % 2;
  node->restriction = restriction;
  node->result = result;
  return node;
}

void check_rank(const SymbolicRegion& restriction, int n) {
  if (n < 0 || sym_max_color(restriction) > n)
    throw SgpsError(ErrorKind::invalid_input, "rank-mismatch");
}

std::pair<SymbolicRegion, std::unique_ptr<SymCertNode>> sym_cn_ctx(
    SolveContext& ctx, int n, const SymbolicRegion& restriction) {
  check_rank(restriction, n);
  int x = n % 2;
  int cap = ctx.limits.dfa_cap;
  if (sym_is_empty(restriction) || n == 0)
    return {restriction, leaf('C', n, restriction, restriction)};

  auto node = std::make_unique<SymCertNode>();
  node->kind = 'C';
  node->n = n;
  node->favored = x;
  node->restriction = restriction;

  SymbolicRegion y_union = sym_empty(ctx.sys);
  SymbolicRegion colors = color_region(ctx, n);
  for (int i = 0;; ++i) {
    if (i >= ctx.limits.iter_cap)
      throw SgpsError(ErrorKind::cap_exceeded, "termination-cap: parity level");
    SymCertNode::Iteration it;
    it.main = sym_force_ctx(ctx, opponent(x), y_union, restriction);
    SymbolicRegion sub_restr = sym_minus(restriction, it.main.force, cap);
    it.z_cert = sym_force_ctx(ctx, x, sym_intersect(colors, sub_restr, cap), sub_restr);
    it.zset = it.z_cert.force;
    SymbolicRegion sub2 = sym_minus(sub_restr, it.zset, cap);
    auto [part, child] = sym_dn_ctx(ctx, rank_for_player(sub2, opponent(x)), sub2);
    it.part = part;
    it.combined = sym_union(it.main.force, part, cap);
    it.child = std::move(child);
    bool converged = sym_equals(it.combined, it.main.force);
    y_union = it.combined;
    node->iterations.push_back(std::move(it));
    if (converged) break;
  }
  if (ctx.metrics)
    ctx.metrics->max_outer_iterations =
        std::max(ctx.metrics->max_outer_iterations, int(node->iterations.size()));

  if (!sym_is_empty(node->iterations.back().part))
    throw SgpsError(ErrorKind::internal, "stabilized level keeps a nonempty subresult");
  node->result = sym_minus(restriction, node->iterations.back().main.force, cap);
  return {node->result, std::move(node)};
}

std::pair<SymbolicRegion, std::unique_ptr<SymCertNode>> sym_dn_ctx(
    SolveContext& ctx, int n, const SymbolicRegion& restriction) {
  check_rank(restriction, n);
  int x = n % 2;
  int cap = ctx.limits.dfa_cap;
  if (sym_is_empty(restriction) || n == 0)
    return {restriction, leaf('D', n, restriction, restriction)};

  auto node = std::make_unique<SymCertNode>();
  node->kind = 'D';
  node->n = n;
  node->favored = x;
  node->restriction = restriction;

  SymbolicRegion v_union = sym_empty(ctx.sys);
  for (int i = 0;; ++i) {
    if (i >= ctx.limits.iter_cap)
      throw SgpsError(ErrorKind::cap_exceeded, "termination-cap: parity level");
    SymCertNode::Iteration it;
    it.main = sym_force_ctx(ctx, x, v_union, restriction);
    SymbolicRegion sub = sym_minus(restriction, it.main.force, cap);
    auto [part, child] = sym_cn_ctx(ctx, rank_for_player(sub, x), sub);
    it.part = part;
    it.combined = sym_union(it.main.force, part, cap);
    it.child = std::move(child);
    bool converged = sym_equals(it.combined, it.main.force);
    v_union = it.combined;
    node->iterations.push_back(std::move(it));
    if (converged) break;
  }
  if (ctx.metrics)
    ctx.metrics->max_outer_iterations =
        std::max(ctx.metrics->max_outer_iterations, int(node->iterations.size()));

  node->result = node->iterations.back().main.force;
  if (!sym_is_empty(node->iterations.back().part))
    throw SgpsError(ErrorKind::internal, "stabilized level keeps a nonempty subresult");
  return {node->result, std::move(node)};
}

SolveContext make_context(const LcsSystemPtr& sys, const Limits& limits,
                          SymSolveMetrics* metrics) {
  SolveContext ctx;
  ctx.sys = sys;
  ctx.limits = limits;
  ctx.full = sym_full(sys);
  ctx.metrics = metrics;
  return ctx;
}

}  // namespace

SymForceCertificate sym_force(const LcsSystemPtr& sys, int player, const SymbolicRegion& target,
                              const SymbolicRegion& restriction, const Limits& limits) {
  SolveContext ctx = make_context(sys, limits, nullptr);
  return sym_force_ctx(ctx, player, target, restriction);
}

std::pair<SymbolicRegion, std::unique_ptr<SymCertNode>> sym_cn(
    const LcsSystemPtr& sys, int n, const SymbolicRegion& restriction, const Limits& limits) {
  SolveContext ctx = make_context(sys, limits, nullptr);
  return sym_cn_ctx(ctx, n, restriction);
}

std::pair<SymbolicRegion, std::unique_ptr<SymCertNode>> sym_dn(
    const LcsSystemPtr& sys, int n, const SymbolicRegion& restriction, const Limits& limits) {
  SolveContext ctx = make_context(sys, limits, nullptr);
  return sym_dn_ctx(ctx, n, restriction);
}

SymSolution sym_solve(const LcsSystemPtr& sys, const Limits& limits) {
  SymSolution sol;
  sol.sys = sys;
  sol.limits = limits;
  SolveContext ctx = make_context(sys, limits, &sol.metrics);

  int n = sys->max_color();
  int x = n % 2;
  sol.declared_rank = sys->rank();
  sol.normalized_rank = n;
  sol.favored = x;

  auto [c_region, c_node] = sym_cn_ctx(ctx, n, ctx.full);
  auto [d_region, d_node] = sym_dn_ctx(ctx, n, ctx.full);
  if (!sym_subset(c_region, d_region, limits.dfa_cap))
    throw SgpsError(ErrorKind::internal, "almost-sure region exceeds the positive region");

  SymbolicRegion as_opp = sym_minus(ctx.full, d_region, limits.dfa_cap);
  SymbolicRegion both = sym_minus(d_region, c_region, limits.dfa_cap);
  sol.as_winner0 = (x == 0) ? c_region : as_opp;
  sol.as_winner1 = (x == 0) ? as_opp : c_region;
  sol.both_wpp = both;
  sol.c_node = std::move(c_node);
  sol.d_node = std::move(d_node);

  // Partition sanity: the three classes tile the full region.
  SymbolicRegion uni = sym_union(sym_union(sol.as_winner0, sol.as_winner1), sol.both_wpp);
  if (!sym_equals(uni, ctx.full) || !sym_is_empty(sym_intersect(sol.as_winner0, sol.as_winner1)) ||
      !sym_is_empty(sym_intersect(sol.both_wpp, sym_union(sol.as_winner0, sol.as_winner1))))
    throw SgpsError(ErrorKind::internal, "winning regions do not partition the state space");
  return sol;
}

int classify_config(const SymSolution& sol, const ConcreteConfig& cfg) {
  if (sym_member(sol.as_winner0, cfg)) return 0;
  if (sym_member(sol.as_winner1, cfg)) return 1;
  return 2;
}

namespace {

ConcreteConfig first_successor_in(const LcsSystem& sys, const ConcreteConfig& cfg,
                                  const SymbolicRegion& region) {
  for (const PlayerMove& mv : player_successors(sys, cfg))
    if (sym_member(region, mv.to)) return mv.to;
  throw SgpsError(ErrorKind::internal, "certificate region has no inside successor");
}

ConcreteConfig force_descend(const LcsSystem& sys, const SymForceCertificate& cert,
                             const ConcreteConfig& cfg) {
  int layer = -1;
  for (size_t i = 0; i < cert.layers.size(); ++i)
    if (sym_member(cert.layers[i], cfg)) {
      layer = int(i);
      break;
    }
  if (layer <= 0)
    throw SgpsError(ErrorKind::internal, "force descent outside the layered region");
  return first_successor_in(sys, cfg, cert.layers[layer - 1]);
}

ConcreteConfig c_win_step(const LcsSystem& sys, const SymCertNode& node,
                          const ConcreteConfig& cfg);
ConcreteConfig c_opp_step(const LcsSystem& sys, const SymCertNode& node,
                          const ConcreteConfig& cfg);
ConcreteConfig d_win_step(const LcsSystem& sys, const SymCertNode& node,
                          const ConcreteConfig& cfg);
ConcreteConfig d_opp_step(const LcsSystem& sys, const SymCertNode& node,
                          const ConcreteConfig& cfg);

// f for the favored player on C = result: three partitions of the final level.
ConcreteConfig c_win_step(const LcsSystem& sys, const SymCertNode& node,
                          const ConcreteConfig& cfg) {
  if (node.iterations.empty()) return first_successor_in(sys, cfg, node.restriction);
  const auto& last = node.iterations.back();
  if (sym_member(last.zset, cfg)) {
    if (sys.control_color(cfg.ctrl) == node.n)
      return first_successor_in(sys, cfg, node.result);
    return force_descend(sys, last.z_cert, cfg);
  }
  return d_opp_step(sys, *last.child, cfg);
}

// f for the opponent on the complement of C: smallest level containing cfg.
ConcreteConfig c_opp_step(const LcsSystem& sys, const SymCertNode& node,
                          const ConcreteConfig& cfg) {
  for (const auto& it : node.iterations) {
    if (!sym_member(it.combined, cfg)) continue;
    if (sym_member(it.main.force, cfg)) return force_descend(sys, it.main, cfg);
    return d_win_step(sys, *it.child, cfg);
  }
  throw SgpsError(ErrorKind::internal, "certificate levels do not cover the query");
}

// f for the favored player on D: smallest level containing cfg.
ConcreteConfig d_win_step(const LcsSystem& sys, const SymCertNode& node,
                          const ConcreteConfig& cfg) {
  if (node.iterations.empty()) return first_successor_in(sys, cfg, node.restriction);
  for (const auto& it : node.iterations) {
    if (!sym_member(it.combined, cfg)) continue;
    if (sym_member(it.main.force, cfg)) return force_descend(sys, it.main, cfg);
    return c_win_step(sys, *it.child, cfg);
  }
  throw SgpsError(ErrorKind::internal, "certificate levels do not cover the query");
}

// f for the opponent on the complement of D: the final level solved that
// whole subgame in the opponent's favor.
ConcreteConfig d_opp_step(const LcsSystem& sys, const SymCertNode& node,
                          const ConcreteConfig& cfg) {
  if (node.iterations.empty())
    throw SgpsError(ErrorKind::internal, "opponent query on a trivial level");
  return c_opp_step(sys, *node.iterations.back().child, cfg);
}

}  // namespace

ConcreteConfig strategy_step(const SymSolution& sol, const ConcreteConfig& cfg) {
  if (cfg.phase != 1) throw SgpsError(ErrorKind::query, "wrong-phase");
  const LcsSystem& sys = *sol.sys;
  int owner = sys.control_owner(cfg.ctrl) == Owner::P0 ? 0 : 1;
  int x = sol.favored;

  if (sym_member(sol.as_favored(), cfg)) {
    if (owner != x) throw SgpsError(ErrorKind::query, "not-winning-here");
    return c_win_step(sys, *sol.c_node, cfg);
  }
  if (sym_member(sol.as_opponent(), cfg)) {
    if (owner != opponent(x)) throw SgpsError(ErrorKind::query, "not-winning-here");
    return d_opp_step(sys, *sol.d_node, cfg);
  }
  // Both players win with positive probability here.
  if (owner == x) return d_win_step(sys, *sol.d_node, cfg);
  return c_opp_step(sys, *sol.c_node, cfg);
}

namespace {

json force_cert_to_json(const SymForceCertificate& c) {
  json j;
  j["player"] = c.player;
  j["target"] = region_to_json(c.target);
  j["restriction"] = region_to_json(c.restriction);
  j["force"] = region_to_json(c.force);
  j["avoid"] = region_to_json(c.avoid);
  json layers = json::array();
  for (const auto& layer : c.layers) layers.push_back(region_to_json(layer));
  j["layers"] = layers;
  return j;
}

SymForceCertificate force_cert_from_json(const LcsSystemPtr& sys, const json& j) {
  SymForceCertificate c;
  c.player = j.at("player").get<int>();
  c.target = region_from_json(sys, j.at("target"));
  c.restriction = region_from_json(sys, j.at("restriction"));
  c.force = region_from_json(sys, j.at("force"));
  c.avoid = region_from_json(sys, j.at("avoid"));
  for (const auto& layer : j.at("layers")) c.layers.push_back(region_from_json(sys, layer));
  return c;
}

json node_to_json(const SymCertNode& node) {
  json j;
  j["kind"] = std::string(1, node.kind);
  j["n"] = node.n;
  j["favored"] = node.favored;
  j["restriction"] = region_to_json(node.restriction);
  j["result"] = region_to_json(node.result);
  json iters = json::array();
  for (const auto& it : node.iterations) {
    json ij;
    ij["main"] = force_cert_to_json(it.main);
    if (node.kind == 'C') {
      ij["zset"] = region_to_json(it.zset);
      ij["z_cert"] = force_cert_to_json(it.z_cert);
    }
    ij["part"] = region_to_json(it.part);
    ij["combined"] = region_to_json(it.combined);
    ij["child"] = node_to_json(*it.child);
    iters.push_back(std::move(ij));
  }
  j["iterations"] = iters;
  return j;
}

std::unique_ptr<SymCertNode> node_from_json(const LcsSystemPtr& sys, const json& j) {
  auto node = std::make_unique<SymCertNode>();
  node->kind = j.at("kind").get<std::string>().at(0);
  node->n = j.at("n").get<int>();
  node->favored = j.at("favored").get<int>();
  node->restriction = region_from_json(sys, j.at("restriction"));
  node->result = region_from_json(sys, j.at("result"));
  for (const auto& ij : j.at("iterations")) {
    SymCertNode::Iteration it;
    it.main = force_cert_from_json(sys, ij.at("main"));
    if (node->kind == 'C') {
      it.zset = region_from_json(sys, ij.at("zset"));
      it.z_cert = force_cert_from_json(sys, ij.at("z_cert"));
    } else {
      it.zset = SymbolicRegion(sys);
      it.z_cert.target = SymbolicRegion(sys);
    }
    it.part = region_from_json(sys, ij.at("part"));
    it.combined = region_from_json(sys, ij.at("combined"));
    it.child = node_from_json(sys, ij.at("child"));
    node->iterations.push_back(std::move(it));
  }
  return node;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SgpsError(ErrorKind::invalid_input, "cannot write " + path.string());
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SgpsError(ErrorKind::invalid_input, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

void save_solution(const SymSolution& sol, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_file(fs::path(dir) / "system.lcs", sol.sys->source_text());

  json meta;
  meta["format"] = "sgps-lcs-result";
  meta["version"] = 1;
  meta["declared_rank"] = sol.declared_rank;
  meta["normalized_rank"] = sol.normalized_rank;
  meta["favored"] = sol.favored;
  meta["limits"] = {{"dfa_cap", sol.limits.dfa_cap}, {"iter_cap", sol.limits.iter_cap}};
  meta["metrics"] = {{"force_calls", sol.metrics.force_calls},
                     {"max_force_rounds", sol.metrics.max_force_rounds},
                     {"max_outer_iterations", sol.metrics.max_outer_iterations},
                     {"max_dfa_states", sol.metrics.max_dfa_states}};
  meta["regions"] = {{"as_winner0", region_to_json(sol.as_winner0)},
                     {"as_winner1", region_to_json(sol.as_winner1)},
                     {"both_wpp", region_to_json(sol.both_wpp)}};
  write_file(fs::path(dir) / "solution.json", meta.dump(2) + "\n");

  json cert;
  cert["c"] = node_to_json(*sol.c_node);
  cert["d"] = node_to_json(*sol.d_node);
  write_file(fs::path(dir) / "certificate.json", cert.dump(2) + "\n");
}

SymSolution load_solution(const std::string& dir) {
  namespace fs = std::filesystem;
  SymSolution sol;
  sol.sys = parse_lcs(read_file(fs::path(dir) / "system.lcs"));
  json meta, cert;
  try {
    meta = json::parse(read_file(fs::path(dir) / "solution.json"));
    cert = json::parse(read_file(fs::path(dir) / "certificate.json"));
    if (meta.at("format") != "sgps-lcs-result")
      throw SgpsError(ErrorKind::invalid_input, "not a result bundle");
    sol.declared_rank = meta.at("declared_rank").get<int>();
    sol.normalized_rank = meta.at("normalized_rank").get<int>();
    sol.favored = meta.at("favored").get<int>();
    sol.limits.dfa_cap = meta.at("limits").at("dfa_cap").get<int>();
    sol.limits.iter_cap = meta.at("limits").at("iter_cap").get<int>();
    sol.metrics.force_calls = meta.at("metrics").at("force_calls").get<long long>();
    sol.metrics.max_force_rounds = meta.at("metrics").at("max_force_rounds").get<int>();
    sol.metrics.max_outer_iterations = meta.at("metrics").at("max_outer_iterations").get<int>();
    sol.metrics.max_dfa_states = meta.at("metrics").at("max_dfa_states").get<int>();
    sol.as_winner0 = region_from_json(sol.sys, meta.at("regions").at("as_winner0"));
    sol.as_winner1 = region_from_json(sol.sys, meta.at("regions").at("as_winner1"));
    sol.both_wpp = region_from_json(sol.sys, meta.at("regions").at("both_wpp"));
    sol.c_node = node_from_json(sol.sys, cert.at("c"));
    sol.d_node = node_from_json(sol.sys, cert.at("d"));
  } catch (const json::exception& e) {
    throw SgpsError(ErrorKind::invalid_input, std::string("bad result bundle: ") + e.what());
  }
  return sol;
}

std::vector<const SymForceCertificate*> collect_force_certs(const SymCertNode* node) {
  std::vector<const SymForceCertificate*> out;
  if (!node) return out;
  for (const auto& it : node->iterations) {
    out.push_back(&it.main);
    if (node->kind == 'C') out.push_back(&it.z_cert);
    auto sub = collect_force_certs(it.child.get());
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

}  // namespace sgps
