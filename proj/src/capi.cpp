#include "sgps.h"

#include <cstring>
#include <string>

#include "nlohmann/json.hpp"
#include "sgps/crosscheck.hpp"
#include "sgps/parity.hpp"
#include "sgps/simulate.hpp"
#include "sgps/symsolve.hpp"

using nlohmann::json;

struct sgps_game {
  sgps::GameGraph graph;
};

struct sgps_lcs {
  sgps::LcsSystemPtr sys;
};

struct sgps_explicit_result {
  sgps::GameGraph graph;
  sgps::ParitySolution solution;
};

struct sgps_lcs_result {
  sgps::SymSolution solution;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

sgps_status status_of(const sgps::SgpsError& e) {
  switch (e.kind()) {
    case sgps::ErrorKind::invalid_input:
      return SGPS_INVALID_INPUT;
    case sgps::ErrorKind::cap_exceeded:
      return SGPS_CAP_EXCEEDED;
    case sgps::ErrorKind::query:
      return SGPS_QUERY_REJECTED;
    case sgps::ErrorKind::internal:
      return SGPS_ERROR;
  }
  return SGPS_ERROR;
}

template <typename Fn>
sgps_status wrap(Fn&& fn) {
  try {
    fn();
    return SGPS_OK;
  } catch (const sgps::SgpsError& e) {
    set_error(e.what());
    return status_of(e);
  } catch (const std::exception& e) {
    set_error(e.what());
    return SGPS_ERROR;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sgps::Limits limits_from(const sgps_limits* limits) {
  sgps::Limits out;
  if (!limits) return out;
  if (limits->dfa_cap > 0) out.dfa_cap = limits->dfa_cap;
  if (limits->iter_cap > 0) out.iter_cap = limits->iter_cap;
  if (limits->loss_len_cap > 0) out.loss_len_cap = limits->loss_len_cap;
  if (limits->enum_cap > 0) out.enum_cap = limits->enum_cap;
  return out;
}

json region_names(const sgps::GameGraph& g, const sgps::Region& r) {
  json out = json::array();
  for (int s : r.ids()) out.push_back(g.name(s));
  return out;
}

json strategy_names(const sgps::GameGraph& g, const sgps::MemorylessStrategy& f) {
  json out = json::object();
  for (int s = 0; s < g.num_states(); ++s)
    if (f.defined(s)) out[g.name(s)] = g.name(f.choice[s]);
  return out;
}

json explicit_solution_json(const sgps::GameGraph& g, const sgps::ParitySolution& sol) {
  json j;
  j["favored"] = sol.partition.favored;
  j["declared_rank"] = sol.certificate.declared_rank;
  j["normalized_rank"] = sol.certificate.normalized_rank;
  j["regions"] = {{"as_winner0", region_names(g, sol.partition.as_winner0)},
                  {"as_winner1", region_names(g, sol.partition.as_winner1)},
                  {"both_wpp", region_names(g, sol.partition.both_wpp)}};
  j["strategies"] = {{"c_favored", strategy_names(g, sol.partition.c_favored)},
                     {"c_opponent", strategy_names(g, sol.partition.c_opponent)},
                     {"d_favored", strategy_names(g, sol.partition.d_favored)},
                     {"d_opponent", strategy_names(g, sol.partition.d_opponent)}};
  return j;
}

const sgps::SymbolicRegion* region_by_name(const sgps::SymSolution& sol,
                                           const std::string& name) {
  if (name == "as_winner0") return &sol.as_winner0;
  if (name == "as_winner1") return &sol.as_winner1;
  if (name == "both_wpp") return &sol.both_wpp;
  return nullptr;
}

}  // namespace

extern "C" {

const char* sgps_version(void) { return "sgps 1.0.0"; }

const char* sgps_last_error(void) { return g_last_error.c_str(); }

void sgps_string_free(char* s) { delete[] s; }

sgps_status sgps_game_load_file(const char* path, sgps_game** out) {
  return wrap([&] { *out = new sgps_game{sgps::load_game_file(path)}; });
}

sgps_status sgps_game_parse_text(const char* text, sgps_game** out) {
  return wrap([&] { *out = new sgps_game{sgps::parse_game_text(text)}; });
}

void sgps_game_free(sgps_game* game) { delete game; }

sgps_status sgps_game_validate(const sgps_game* game, char** violations_json) {
  return wrap([&] {
    json arr = json::array();
    for (const auto& v : sgps::validate(game->graph))
      arr.push_back({{"rule", v.rule}, {"state", v.state}, {"message", v.message}});
    *violations_json = copy_string(arr.dump());
  });
}

sgps_status sgps_game_solve(const sgps_game* game, sgps_explicit_result** out) {
  return wrap([&] {
    auto* result = new sgps_explicit_result{game->graph, sgps::solve_parity(game->graph)};
    *out = result;
  });
}

void sgps_explicit_result_free(sgps_explicit_result* result) { delete result; }

sgps_status sgps_explicit_result_json(const sgps_explicit_result* result, char** json_out) {
  return wrap([&] {
    *json_out = copy_string(explicit_solution_json(result->graph, result->solution).dump(2) + "\n");
  });
}

sgps_status sgps_game_simulate(const sgps_explicit_result* result, const char* start_state,
                               int horizon, int trials, uint64_t seed, char** stats_json) {
  return wrap([&] {
    const sgps::GameGraph& g = result->graph;
    int start = g.state_index(start_state);
    if (start < 0)
      throw sgps::SgpsError(sgps::ErrorKind::invalid_input,
                            std::string("unknown state '") + start_state + "'");
    const sgps::ParityPartition& part = result->solution.partition;
    int x = part.favored;

    // Drive the player who wins at the start state.
    int policy_player;
    const sgps::MemorylessStrategy* strategy;
    const sgps::Region* track;
    std::string region_name;
    if ((x == 0 ? part.as_winner0 : part.as_winner1).test(start)) {
      policy_player = x;
      strategy = &part.c_favored;
      track = x == 0 ? &part.as_winner0 : &part.as_winner1;
      region_name = x == 0 ? "as_winner0" : "as_winner1";
    } else if ((x == 0 ? part.as_winner1 : part.as_winner0).test(start)) {
      policy_player = sgps::opponent(x);
      strategy = &part.d_opponent;
      track = x == 0 ? &part.as_winner1 : &part.as_winner0;
      region_name = x == 0 ? "as_winner1" : "as_winner0";
    } else {
      policy_player = x;
      strategy = &part.d_favored;
      track = &part.both_wpp;
      region_name = "both_wpp";
    }
    sgps::ExplicitPolicy policy = [strategy](int s) { return strategy->choice[s]; };
    sgps::PlayStats stats = sgps::simulate_explicit(g, start, policy, policy_player, nullptr,
                                                    horizon, trials, seed, nullptr, track);
    json j = stats.to_json();
    j["start"] = start_state;
    j["policy_player"] = policy_player;
    j["tracked_region"] = region_name;
    *stats_json = copy_string(j.dump(2) + "\n");
  });
}

sgps_status sgps_lcs_load_file(const char* path, sgps_lcs** out) {
  return wrap([&] { *out = new sgps_lcs{sgps::load_lcs_file(path)}; });
}

sgps_status sgps_lcs_parse_text(const char* text, sgps_lcs** out) {
  return wrap([&] { *out = new sgps_lcs{sgps::parse_lcs(text)}; });
}

void sgps_lcs_free(sgps_lcs* sys) { delete sys; }

sgps_status sgps_lcs_solve(const sgps_lcs* sys, const sgps_limits* limits,
                           sgps_lcs_result** out) {
  return wrap([&] {
    *out = new sgps_lcs_result{sgps::sym_solve(sys->sys, limits_from(limits))};
  });
}

void sgps_lcs_result_free(sgps_lcs_result* result) { delete result; }

sgps_status sgps_lcs_result_save(const sgps_lcs_result* result, const char* dir) {
  return wrap([&] { sgps::save_solution(result->solution, dir); });
}

sgps_status sgps_lcs_result_load(const char* dir, sgps_lcs_result** out) {
  return wrap([&] { *out = new sgps_lcs_result{sgps::load_solution(dir)}; });
}

sgps_status sgps_lcs_result_metrics_json(const sgps_lcs_result* result, char** json_out) {
  return wrap([&] {
    const sgps::SymSolveMetrics& m = result->solution.metrics;
    json j = {{"force_calls", m.force_calls},
              {"max_force_rounds", m.max_force_rounds},
              {"max_outer_iterations", m.max_outer_iterations},
              {"max_dfa_states", m.max_dfa_states},
              {"favored", result->solution.favored},
              {"normalized_rank", result->solution.normalized_rank}};
    *json_out = copy_string(j.dump(2) + "\n");
  });
}

sgps_status sgps_lcs_result_member(const sgps_lcs_result* result, const char* region,
                                   const char* config_literal, int* out_member) {
  return wrap([&] {
    const sgps::SymbolicRegion* r = region_by_name(result->solution, region);
    if (!r)
      throw sgps::SgpsError(sgps::ErrorKind::invalid_input,
                            std::string("unknown region '") + region + "'");
    sgps::ConcreteConfig cfg =
        sgps::parse_config_literal(*result->solution.sys, config_literal);
    *out_member = sgps::sym_member(*r, cfg) ? 1 : 0;
  });
}

sgps_status sgps_lcs_result_classify(const sgps_lcs_result* result, const char* config_literal,
                                     int* out_class) {
  return wrap([&] {
    sgps::ConcreteConfig cfg =
        sgps::parse_config_literal(*result->solution.sys, config_literal);
    *out_class = sgps::classify_config(result->solution, cfg);
  });
}

sgps_status sgps_lcs_result_strategy_step(const sgps_lcs_result* result,
                                          const char* config_literal,
                                          char** successor_literal) {
  return wrap([&] {
    const sgps::SymSolution& sol = result->solution;
    sgps::ConcreteConfig cfg = sgps::parse_config_literal(*sol.sys, config_literal);
    sgps::ConcreteConfig next = sgps::strategy_step(sol, cfg);
    *successor_literal = copy_string(sgps::format_config_literal(*sol.sys, next));
  });
}

sgps_status sgps_lcs_simulate(const sgps_lcs_result* result, const char* start_literal,
                              int horizon, int trials, uint64_t seed, char** stats_json) {
  return wrap([&] {
    const sgps::SymSolution& sol = result->solution;
    sgps::ConcreteConfig start = sgps::parse_config_literal(*sol.sys, start_literal);
    int cls = sgps::classify_config(sol, start);
    int policy_player = cls == 2 ? sol.favored : cls;
    const sgps::SymbolicRegion* track =
        cls == 0 ? &sol.as_winner0 : cls == 1 ? &sol.as_winner1 : &sol.both_wpp;
    // Certificate strategy where the query is legal, first successor when the
    // play has drifted out of the policy player's winning region.
    sgps::LcsPolicy policy = [&sol](const sgps::ConcreteConfig& cfg) {
      try {
        return sgps::strategy_step(sol, cfg);
      } catch (const sgps::SgpsError& e) {
        if (e.kind() != sgps::ErrorKind::query) throw;
        return sgps::player_successors(*sol.sys, cfg).front().to;
      }
    };
    sgps::PlayStats stats =
        sgps::simulate_lcs(*sol.sys, start, policy, policy_player, horizon, trials, seed, track);
    json j = stats.to_json();
    j["start"] = start_literal;
    j["policy_player"] = policy_player;
    j["tracked_region"] = cls == 0 ? "as_winner0" : cls == 1 ? "as_winner1" : "both_wpp";
    *stats_json = copy_string(j.dump(2) + "\n");
  });
}

sgps_status sgps_lcs_crosscheck(const sgps_lcs_result* result, int k, int samples,
                                uint64_t seed, int* out_all_pass, char** report_json) {
  return wrap([&] {
    sgps::CrosscheckReport report = sgps::crosscheck(result->solution, k, samples, seed);
    *out_all_pass = report.all_pass() ? 1 : 0;
    *report_json = copy_string(report.to_json().dump(2) + "\n");
  });
}

}  // extern "C"
