// Command-line front end. Everything functional goes through the C API in
// sgps.h; this file only parses arguments, moves bytes and writes reports.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "sgps.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_of(sgps_status status) {
  switch (status) {
    case SGPS_OK: return 0;
    case SGPS_INVALID_INPUT: return 2;
    case SGPS_CAP_EXCEEDED: return 3;
    case SGPS_QUERY_REJECTED: return 4;
    default: return 1;
  }
}

std::string status_label(sgps_status status) {
  switch (status) {
    case SGPS_OK: return "ok";
    case SGPS_CAP_EXCEEDED: return "cap-exceeded";
    default: return "invalid-input";
  }
}

std::string fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unreadable";
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= std::uint8_t(c);
    h *= 0x100000001B3ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

struct RunReport {
  std::string command;
  json inputs = json::object();
  json settings = json::object();
  std::vector<std::string> outputs;
  json metrics = json::object();
  std::string status = "ok";

  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void note_input(const std::string& path) { inputs[path] = fnv1a_file(path); }

  json to_json() const {
    return json{{"command", command}, {"inputs", inputs},   {"settings", settings},
                {"outputs", outputs}, {"metrics", metrics}, {"status", status}};
  }

  // With an output directory the report lands there; otherwise it goes to
  // stderr so stdout stays pure data.
  void emit(const std::string& out_dir) {
    auto wall = std::chrono::duration_cast<std::chrono::microseconds>(
                    std::chrono::steady_clock::now() - started)
                    .count();
    metrics["wall_us"] = wall;
    if (!out_dir.empty()) {
      std::error_code ec;
      fs::create_directories(out_dir, ec);
      std::ofstream out(fs::path(out_dir) / "run_report.json", std::ios::binary);
      if (out) {
        out << to_json().dump(2) << "\n";
        return;
      }
    }
    std::cerr << to_json().dump() << "\n";
  }
};

int fail(RunReport& report, const std::string& out_dir, sgps_status status) {
  std::cerr << "error: " << sgps_last_error() << "\n";
  report.status = status_label(status);
  report.emit(out_dir);
  return exit_code_of(status);
}

bool write_output(RunReport& report, const std::string& out_dir, const std::string& name,
                  const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return true;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  fs::path path = fs::path(out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return false;
  }
  out << content;
  report.outputs.push_back(path.string());
  return true;
}

struct StringGuard {
  char* str = nullptr;
  ~StringGuard() { sgps_string_free(str); }
};

int run_solve_explicit(const std::string& path, const std::string& out_dir,
                       const std::string& format) {
  RunReport report;
  report.command = "solve-explicit";
  report.note_input(path);
  report.settings["format"] = format;

  sgps_game* game = nullptr;
  sgps_status st = sgps_game_load_file(path.c_str(), &game);
  if (st != SGPS_OK) return fail(report, out_dir, st);

  sgps_explicit_result* result = nullptr;
  st = sgps_game_solve(game, &result);
  sgps_game_free(game);
  if (st != SGPS_OK) return fail(report, out_dir, st);

  StringGuard text;
  st = sgps_explicit_result_json(result, &text.str);
  sgps_explicit_result_free(result);
  if (st != SGPS_OK) return fail(report, out_dir, st);

  std::string payload = text.str;
  if (format == "text") {
    json j = json::parse(payload);
    std::ostringstream out;
    out << "favored player: " << j["favored"] << "\n";
    for (const char* key : {"as_winner0", "as_winner1", "both_wpp"}) {
      out << key << ":";
      for (const auto& name : j["regions"][key]) out << " " << name.get<std::string>();
      out << "\n";
    }
    payload = out.str();
  }
  if (!write_output(report, out_dir, format == "text" ? "solution.txt" : "solution.json",
                    payload))
    return fail(report, out_dir, SGPS_INVALID_INPUT);
  report.emit(out_dir);
  return 0;
}

int run_solve_lcs(const std::string& path, const std::string& out_dir, int dfa_cap,
                  int iter_cap) {
  RunReport report;
  report.command = "solve-lcs";
  report.note_input(path);
  report.settings["dfa_cap"] = dfa_cap;
  report.settings["iter_cap"] = iter_cap;

  sgps_lcs* sys = nullptr;
  sgps_status st = sgps_lcs_load_file(path.c_str(), &sys);
  if (st != SGPS_OK) return fail(report, out_dir, st);

  sgps_limits limits{dfa_cap, iter_cap, 0, 0};
  sgps_lcs_result* result = nullptr;
  st = sgps_lcs_solve(sys, &limits, &result);
  sgps_lcs_free(sys);
  if (st != SGPS_OK) return fail(report, out_dir, st);

  st = sgps_lcs_result_save(result, out_dir.c_str());
  if (st == SGPS_OK) {
    for (const char* name : {"system.lcs", "solution.json", "certificate.json"})
      report.outputs.push_back((fs::path(out_dir) / name).string());
    StringGuard metrics;
    if (sgps_lcs_result_metrics_json(result, &metrics.str) == SGPS_OK)
      report.metrics["solver"] = json::parse(metrics.str);
  }
  sgps_lcs_result_free(result);
  if (st != SGPS_OK) return fail(report, out_dir, st);
  report.emit(out_dir);
  return 0;
}

int run_member(const std::string& dir, const std::string& literal, const std::string& region,
               const std::string& out_dir) {
  RunReport report;
  report.command = "member";
  report.settings["region"] = region;
  report.settings["literal"] = literal;

  sgps_lcs_result* result = nullptr;
  sgps_status st = sgps_lcs_result_load(dir.c_str(), &result);
  if (st != SGPS_OK) return fail(report, out_dir, st);

  std::string full_name = region == "as0"   ? "as_winner0"
                          : region == "as1" ? "as_winner1"
                                            : "both_wpp";
  int member = 0;
  st = sgps_lcs_result_member(result, full_name.c_str(), literal.c_str(), &member);
  sgps_lcs_result_free(result);
  if (st != SGPS_OK) return fail(report, out_dir, st);
  std::cout << (member ? "true" : "false") << "\n";
  report.metrics["member"] = bool(member);
  report.emit(out_dir);
  return 0;
}

int run_strategy_step(const std::string& dir, const std::string& literal,
                      const std::string& out_dir) {
  RunReport report;
  report.command = "strategy-step";
  report.settings["literal"] = literal;

  sgps_lcs_result* result = nullptr;
  sgps_status st = sgps_lcs_result_load(dir.c_str(), &result);
  if (st != SGPS_OK) return fail(report, out_dir, st);

  StringGuard next;
  st = sgps_lcs_result_strategy_step(result, literal.c_str(), &next.str);
  sgps_lcs_result_free(result);
  if (st != SGPS_OK) return fail(report, out_dir, st);
  std::cout << next.str << "\n";
  report.emit(out_dir);
  return 0;
}

int run_simulate(const std::string& game_path, const std::string& result_dir,
                 const std::string& start, int horizon, int trials, std::uint64_t seed,
                 const std::string& out_dir) {
  RunReport report;
  report.command = "simulate";
  report.settings = {{"start", start}, {"horizon", horizon}, {"trials", trials}, {"seed", seed}};

  StringGuard stats;
  sgps_status st;
  if (!game_path.empty()) {
    report.note_input(game_path);
    sgps_game* game = nullptr;
    st = sgps_game_load_file(game_path.c_str(), &game);
    if (st != SGPS_OK) return fail(report, out_dir, st);
    sgps_explicit_result* solved = nullptr;
    st = sgps_game_solve(game, &solved);
    sgps_game_free(game);
    if (st != SGPS_OK) return fail(report, out_dir, st);
    st = sgps_game_simulate(solved, start.c_str(), horizon, trials, seed, &stats.str);
    sgps_explicit_result_free(solved);
  } else {
    sgps_lcs_result* result = nullptr;
    st = sgps_lcs_result_load(result_dir.c_str(), &result);
    if (st != SGPS_OK) return fail(report, out_dir, st);
    st = sgps_lcs_simulate(result, start.c_str(), horizon, trials, seed, &stats.str);
    sgps_lcs_result_free(result);
  }
  if (st != SGPS_OK) return fail(report, out_dir, st);
  if (!write_output(report, out_dir, "stats.json", stats.str))
    return fail(report, out_dir, SGPS_INVALID_INPUT);
  report.emit(out_dir);
  return 0;
}

int run_crosscheck(const std::string& path, const std::string& result_dir, int k, int samples,
                   std::uint64_t seed, const std::string& out_dir) {
  RunReport report;
  report.command = "crosscheck";
  report.settings = {{"k", k}, {"samples", samples}, {"seed", seed}};

  sgps_lcs_result* result = nullptr;
  sgps_status st;
  if (!path.empty()) {
    report.note_input(path);
    sgps_lcs* sys = nullptr;
    st = sgps_lcs_load_file(path.c_str(), &sys);
    if (st != SGPS_OK) return fail(report, out_dir, st);
    st = sgps_lcs_solve(sys, nullptr, &result);
    sgps_lcs_free(sys);
  } else {
    st = sgps_lcs_result_load(result_dir.c_str(), &result);
  }
  if (st != SGPS_OK) return fail(report, out_dir, st);

  int all_pass = 0;
  StringGuard report_json;
  st = sgps_lcs_crosscheck(result, k, samples, seed, &all_pass, &report_json.str);
  sgps_lcs_result_free(result);
  if (st != SGPS_OK) return fail(report, out_dir, st);

  if (!write_output(report, out_dir, "crosscheck.json", report_json.str))
    return fail(report, out_dir, SGPS_INVALID_INPUT);
  report.metrics["all_pass"] = bool(all_pass);
  if (!all_pass) report.status = "invalid-input";
  report.emit(out_dir);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qualitative stochastic parity game solver for lossy channel systems"};
  app.require_subcommand(1);

  std::string path, out_dir, result_dir, literal, start;
  std::string region = "as0";
  std::string format = "json";
  int dfa_cap = 0, iter_cap = 0, k = 2, samples = 2, horizon = 64, trials = 1000;
  std::uint64_t seed = 1;

  auto* solve_explicit = app.add_subcommand("solve-explicit", "Solve an explicit game file");
  solve_explicit->add_option("file", path)->required();
  solve_explicit->add_option("--out", out_dir, "Output directory");
  solve_explicit->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* solve_lcs = app.add_subcommand("solve-lcs", "Solve a channel system symbolically");
  solve_lcs->add_option("file", path)->required();
  solve_lcs->add_option("--out", out_dir, "Result bundle directory")->required();
  solve_lcs->add_option("--dfa-cap", dfa_cap, "Max DFA states (0 = default)");
  solve_lcs->add_option("--iter-cap", iter_cap, "Max fixpoint rounds (0 = default)");

  auto* member = app.add_subcommand("member", "Query a config against a solved bundle");
  member->add_option("result_dir", result_dir)->required();
  member->add_option("config", literal)->required();
  member->add_option("--region", region)->check(CLI::IsMember({"as0", "as1", "both"}));
  member->add_option("--out", out_dir);

  auto* step = app.add_subcommand("strategy-step", "One winning-strategy move");
  step->add_option("result_dir", result_dir)->required();
  step->add_option("config", literal)->required();
  step->add_option("--out", out_dir);

  auto* simulate = app.add_subcommand("simulate", "Seeded plays under the solved strategy");
  simulate->add_option("--game", path, "Explicit game file");
  simulate->add_option("--result", result_dir, "Solved channel-system bundle");
  simulate->add_option("--start", start, "State name or config literal")->required();
  simulate->add_option("--horizon", horizon);
  simulate->add_option("--trials", trials);
  simulate->add_option("--seed", seed);
  simulate->add_option("--out", out_dir);

  auto* crosscheck = app.add_subcommand("crosscheck", "Validate a solve against ground truth");
  crosscheck->add_option("file", path, "Channel system to solve and check");
  crosscheck->add_option("--result", result_dir, "Check an existing bundle instead");
  crosscheck->add_option("--k", k, "Channel length bound for enumeration");
  crosscheck->add_option("--samples", samples, "Random regions / plays per battery");
  crosscheck->add_option("--seed", seed);
  crosscheck->add_option("--out", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_explicit->parsed()) return run_solve_explicit(path, out_dir, format);
    if (solve_lcs->parsed()) return run_solve_lcs(path, out_dir, dfa_cap, iter_cap);
    if (member->parsed()) return run_member(result_dir, literal, region, out_dir);
    if (step->parsed()) return run_strategy_step(result_dir, literal, out_dir);
    if (simulate->parsed()) {
      if (path.empty() == result_dir.empty()) {
        std::cerr << "error: simulate needs exactly one of --game / --result\n";
        return 2;
      }
      return run_simulate(path, result_dir, start, horizon, trials, seed, out_dir);
    }
    if (crosscheck->parsed()) {
      if (path.empty() == result_dir.empty()) {
        std::cerr << "error: crosscheck needs exactly one of <file> / --result\n";
        return 2;
      }
      return run_crosscheck(path, result_dir, k, samples, seed, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
