#include "sgps/crosscheck.hpp"

#include <random>

#include "nlohmann/json.hpp"
#include "sgps/simulate.hpp"

namespace sgps {

using nlohmann::json;

json CrosscheckReport::to_json() const {
  json arr = json::array();
  for (const auto& c : checks) {
    json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["fail"] = c.fail;
    j["examples"] = c.examples;
    arr.push_back(std::move(j));
  }
  return json{{"checks", arr}, {"all_pass", all_pass()}};
}

namespace {

void record(CheckOutcome& out, bool ok, const std::string& what) {
  if (ok) {
    ++out.pass;
  } else {
    ++out.fail;
    if (out.examples.size() < 3) out.examples.push_back(what);
  }
}

std::vector<ConcreteConfig> all_configs(const LcsSystem& sys, int len) {
  std::vector<std::string> words{""};
  size_t from = 0;
  for (int l = 1; l <= len; ++l) {
    size_t to = words.size();
    for (size_t i = from; i < to; ++i)
      for (int m = 0; m < sys.num_messages(); ++m)
        words.push_back(words[i] + sys.message_symbol(m));
    from = to;
  }
  std::vector<ConcreteConfig> out;
  std::vector<size_t> idx(sys.num_channels(), 0);
  for (int ctrl = 0; ctrl < sys.num_controls(); ++ctrl) {
    std::fill(idx.begin(), idx.end(), 0);
    for (;;) {
      for (int phase = 0; phase <= 1; ++phase) {
        ConcreteConfig cfg;
        cfg.ctrl = ctrl;
        cfg.phase = phase;
        for (size_t c = 0; c < idx.size(); ++c) cfg.channels.push_back(words[idx[c]]);
        out.push_back(std::move(cfg));
      }
      size_t pos = 0;
      while (pos < idx.size()) {
        if (++idx[pos] < words.size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) break;
    }
  }
  return out;
}

std::vector<ConcreteConfig> concrete_successors(const LcsSystem& sys,
                                                const ConcreteConfig& cfg) {
  std::vector<ConcreteConfig> out;
  if (cfg.phase == 1) {
    for (const PlayerMove& mv : player_successors(sys, cfg)) out.push_back(mv.to);
  } else {
    Limits lim;
    lim.loss_len_cap = 64;
    for (const LossOutcome& o : loss_distribution(sys, cfg, lim)) out.push_back(o.to);
  }
  return out;
}

ConcreteConfig random_config(std::mt19937_64& rng, const LcsSystem& sys, int max_len) {
  ConcreteConfig cfg;
  cfg.ctrl = int(rng() % std::uint64_t(sys.num_controls()));
  cfg.phase = int(rng() % 2);
  for (int c = 0; c < sys.num_channels(); ++c) {
    int len = int(rng() % std::uint64_t(max_len + 1));
    std::string w;
    for (int i = 0; i < len; ++i)
      w.push_back(sys.message_symbol(int(rng() % std::uint64_t(sys.num_messages()))));
    cfg.channels.push_back(std::move(w));
  }
  return cfg;
}

void check_pointwise_pre(const SymSolution& sol, int k, int samples, std::uint64_t seed,
                         CheckOutcome& out) {
  const LcsSystemPtr& sys = sol.sys;
  std::mt19937_64 rng(derive_trial_seed(seed, 1));
  std::vector<ConcreteConfig> configs = all_configs(*sys, k);
  SymbolicRegion full = sym_full(sys);

  for (int round = 0; round < samples; ++round) {
    std::vector<ConcreteConfig> lits;
    for (int i = 0; i < 4; ++i) lits.push_back(random_config(rng, *sys, k));
    SymbolicRegion r = sym_from_literals(sys, lits, sol.limits.dfa_cap);

    std::vector<SymbolicRegion> per_transition;
    for (int t = 0; t < int(sys->transitions().size()); ++t)
      per_transition.push_back(pre_transition(r, t, sol.limits.dfa_cap));
    SymbolicRegion fb = pre_fallback(r, sol.limits.dfa_cap);
    SymbolicRegion lp = pre_loss(r, sol.limits.dfa_cap);
    SymbolicRegion pe = pre_exists_sym(r, full, sol.limits.dfa_cap);
    SymbolicRegion pf = pre_forall_sym(r, full, sol.limits.dfa_cap);

    for (const ConcreteConfig& cfg : configs) {
      std::string where = format_config_literal(*sys, cfg);
      if (cfg.phase == 1) {
        auto moves = player_successors(*sys, cfg);
        for (int t = 0; t < int(sys->transitions().size()); ++t) {
          bool expect = false;
          for (const PlayerMove& mv : moves)
            if (mv.transition == t) expect = sym_member(r, mv.to);
          record(out, sym_member(per_transition[t], cfg) == expect,
                 "pre[t" + std::to_string(t) + "] at " + where);
        }
        bool fb_expect = moves.size() == 1 && moves[0].transition == -1 &&
                         sym_member(r, moves[0].to);
        record(out, sym_member(fb, cfg) == fb_expect, "pre[fallback] at " + where);
      } else {
        bool expect = false;
        for (const auto& succ : concrete_successors(*sys, cfg))
          expect |= sym_member(r, succ);
        record(out, sym_member(lp, cfg) == expect, "pre[loss] at " + where);
      }
      bool any = false, all = true;
      for (const auto& succ : concrete_successors(*sys, cfg)) {
        bool in = sym_member(r, succ);
        any |= in;
        all &= in;
      }
      record(out, sym_member(pe, cfg) == any, "pre-exists at " + where);
      record(out, sym_member(pf, cfg) == all, "pre-forall at " + where);
    }
  }
}

void check_fixpoint_equation(const SymSolution& sol, CheckOutcome& out) {
  const LcsSystemPtr& sys = sol.sys;
  int cap = sol.limits.dfa_cap;
  std::vector<const SymForceCertificate*> certs = collect_force_certs(sol.c_node.get());
  auto more = collect_force_certs(sol.d_node.get());
  certs.insert(certs.end(), more.begin(), more.end());
  // Rank-0 trees have no stored fixpoints; derive one fresh so the battery
  // is never vacuous.
  SymForceCertificate fresh;
  if (certs.empty()) {
    SymbolicRegion full = sym_full(sys);
    fresh = sym_force(sys, sol.favored, sol.as_favored(), full, sol.limits);
    certs.push_back(&fresh);
  }
  for (const SymForceCertificate* c : certs) {
    SymbolicRegion pe = pre_exists_sym(c->force, c->restriction, cap);
    SymbolicRegion pf = pre_forall_sym(c->force, c->restriction, cap);
    SymbolicRegion expect = sym_union(c->target, sym_random_part(pe), cap);
    expect = sym_union(expect, sym_player_part(pe, c->player), cap);
    expect = sym_union(expect, sym_player_part(pf, opponent(c->player)), cap);
    record(out, sym_equals(expect, c->force), "fixpoint equation for a stored layer");
    record(out, int(c->layers.size()) <= sol.limits.iter_cap, "layer count under the cap");
  }
}

void check_partition(const SymSolution& sol, CheckOutcome& out) {
  SymbolicRegion full = sym_full(sol.sys);
  int cap = sol.limits.dfa_cap;
  SymbolicRegion uni = sym_union(sym_union(sol.as_winner0, sol.as_winner1, cap), sol.both_wpp, cap);
  record(out, sym_equals(uni, full), "union of the three regions is the full space");
  record(out, sym_is_empty(sym_intersect(sol.as_winner0, sol.as_winner1, cap)),
         "almost-sure regions are disjoint");
  record(out, sym_is_empty(sym_intersect(sol.both_wpp, sol.as_winner0, cap)),
         "both-positive does not meet as_winner0");
  record(out, sym_is_empty(sym_intersect(sol.both_wpp, sol.as_winner1, cap)),
         "both-positive does not meet as_winner1");
}

void check_strategy_closure(const SymSolution& sol, int k, int samples, std::uint64_t seed,
                            CheckOutcome& out) {
  const LcsSystemPtr& sys = sol.sys;
  std::vector<ConcreteConfig> configs = all_configs(*sys, std::min(k, 2));
  int horizon = 24;
  for (int which = 0; which < 2; ++which) {
    const SymbolicRegion& region = which == 0 ? sol.as_favored() : sol.as_opponent();
    int player = which == 0 ? sol.favored : opponent(sol.favored);
    std::vector<ConcreteConfig> starts;
    for (const auto& cfg : configs)
      if (sym_member(region, cfg) && int(starts.size()) < 8) starts.push_back(cfg);
    for (const ConcreteConfig& start : starts) {
      int plays = std::max(1, samples / std::max<int>(1, int(starts.size())));
      for (int trial = 0; trial < plays; ++trial) {
        std::mt19937_64 rng(derive_trial_seed(seed ^ (which + 2), trial));
        ConcreteConfig cfg = start;
        bool stayed = true;
        try {
          for (int step = 0; step < horizon && stayed; ++step) {
            if (!sym_member(region, cfg)) stayed = false;
            if (cfg.phase == 0) {
              cfg = sample_loss_step(*sys, cfg, rng);
            } else if (sys->control_owner(cfg.ctrl) == player_owner(player)) {
              cfg = strategy_step(sol, cfg);
            } else {
              auto moves = player_successors(*sys, cfg);
              cfg = moves[rng() % moves.size()].to;
            }
          }
          stayed = stayed && sym_member(region, cfg);
        } catch (const SgpsError&) {
          stayed = false;  // a strategy query failed mid-play
        }
        record(out, stayed,
               "play from " + format_config_literal(*sys, start) + " left its region");
      }
    }
  }
}

}  // namespace

CrosscheckReport crosscheck(const SymSolution& sol, int k, int samples, std::uint64_t seed) {
  CrosscheckReport report;
  report.checks.resize(4);
  report.checks[0].name = "pointwise-pre";
  check_pointwise_pre(sol, k, samples, seed, report.checks[0]);
  report.checks[1].name = "fixpoint-equation";
  check_fixpoint_equation(sol, report.checks[1]);
  report.checks[2].name = "partition";
  check_partition(sol, report.checks[2]);
  report.checks[3].name = "strategy-closure";
  check_strategy_closure(sol, k, samples, seed, report.checks[3]);
  return report;
}

}  // namespace sgps
