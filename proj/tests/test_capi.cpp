// Exercises the shared-library boundary only: opaque handles, status codes,
// string ownership. Functional depth lives in the C++ suites.

#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "sgps.h"

using nlohmann::json;

namespace {

std::string data_path(const std::string& rel) { return std::string(SGPS_DATA_DIR) + "/" + rel; }

struct Str {
  char* s = nullptr;
  ~Str() { sgps_string_free(s); }
};

}  // namespace

TEST_CASE("version and error strings are always available") {
  CHECK(std::string(sgps_version()).find("sgps") == 0);
  CHECK(sgps_last_error() != nullptr);
}

TEST_CASE("explicit game round trip through the C surface") {
  sgps_game* game = nullptr;
  REQUIRE(sgps_game_load_file(data_path("games/three_state.game").c_str(), &game) == SGPS_OK);

  Str violations;
  REQUIRE(sgps_game_validate(game, &violations.s) == SGPS_OK);
  CHECK(json::parse(violations.s).empty());

  sgps_explicit_result* result = nullptr;
  REQUIRE(sgps_game_solve(game, &result) == SGPS_OK);
  sgps_game_free(game);

  Str solution;
  REQUIRE(sgps_explicit_result_json(result, &solution.s) == SGPS_OK);
  json j = json::parse(solution.s);
  CHECK(j["regions"]["as_winner0"] == json::array({"b"}));
  CHECK(j["regions"]["as_winner1"] == json::array({"a"}));
  CHECK(j["regions"]["both_wpp"] == json::array({"r"}));

  Str stats;
  REQUIRE(sgps_game_simulate(result, "b", 32, 50, 7, &stats.s) == SGPS_OK);
  json sj = json::parse(stats.s);
  CHECK(sj["region_exit_steps"] == 0);
  CHECK(sj["rng"] == "mt19937_64");
  sgps_explicit_result_free(result);
}

TEST_CASE("bad inputs surface as status codes with messages") {
  sgps_game* game = nullptr;
  CHECK(sgps_game_parse_text("game rank=0\nstate a owner=9 color=0\n", &game) ==
        SGPS_INVALID_INPUT);
  CHECK(std::string(sgps_last_error()).find("line 2") != std::string::npos);

  sgps_lcs* sys = nullptr;
  CHECK(sgps_lcs_load_file("/nonexistent.lcs", &sys) == SGPS_INVALID_INPUT);
}

TEST_CASE("lcs solve, queries and bundle io through the C surface") {
  namespace fs = std::filesystem;
  sgps_lcs* sys = nullptr;
  REQUIRE(sgps_lcs_load_file(data_path("lcs/router.lcs").c_str(), &sys) == SGPS_OK);

  sgps_lcs_result* result = nullptr;
  REQUIRE(sgps_lcs_solve(sys, nullptr, &result) == SGPS_OK);
  sgps_lcs_free(sys);

  int member = -1;
  REQUIRE(sgps_lcs_result_member(result, "as_winner1", "start | c=ab,d= | phase=1", &member) ==
          SGPS_OK);
  CHECK(member == 1);
  REQUIRE(sgps_lcs_result_member(result, "as_winner0", "start | c=ab,d= | phase=1", &member) ==
          SGPS_OK);
  CHECK(member == 0);
  CHECK(sgps_lcs_result_member(result, "nonsense", "start | c= | phase=1", &member) ==
        SGPS_INVALID_INPUT);

  int cls = -1;
  REQUIRE(sgps_lcs_result_classify(result, "start | c=a,d= | phase=0", &cls) == SGPS_OK);
  CHECK(cls == 2);

  Str next;
  REQUIRE(sgps_lcs_result_strategy_step(result, "start | c=ab,d= | phase=1", &next.s) ==
          SGPS_OK);
  CHECK(std::string(next.s) == "bad | c=b,d= | phase=0");
  CHECK(sgps_lcs_result_strategy_step(result, "good | c=,d= | phase=1", &next.s) ==
        SGPS_QUERY_REJECTED);

  fs::path dir = fs::temp_directory_path() / "sgps_capi_bundle";
  fs::remove_all(dir);
  REQUIRE(sgps_lcs_result_save(result, dir.string().c_str()) == SGPS_OK);

  sgps_lcs_result* reloaded = nullptr;
  REQUIRE(sgps_lcs_result_load(dir.string().c_str(), &reloaded) == SGPS_OK);
  Str step2;
  REQUIRE(sgps_lcs_result_strategy_step(reloaded, "start | c=ab,d= | phase=1", &step2.s) ==
          SGPS_OK);
  CHECK(std::string(step2.s) == "bad | c=b,d= | phase=0");

  Str stats;
  REQUIRE(sgps_lcs_simulate(reloaded, "bad | c=,d= | phase=1", 20, 25, 99, &stats.s) == SGPS_OK);
  CHECK(json::parse(stats.s)["region_exit_steps"] == 0);

  int all_pass = 0;
  Str report;
  REQUIRE(sgps_lcs_crosscheck(reloaded, 1, 1, 5, &all_pass, &report.s) == SGPS_OK);
  CHECK(all_pass == 1);
  CHECK(json::parse(report.s)["all_pass"] == true);

  sgps_lcs_result_free(reloaded);
  sgps_lcs_result_free(result);
  fs::remove_all(dir);
}
