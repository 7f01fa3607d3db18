#include <fstream>
#include <map>
#include <sstream>

#include "nlohmann/json.hpp"
#include "sgps/game.hpp"

namespace sgps {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw SgpsError(ErrorKind::invalid_input, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

// Accepts "key=value" and returns value or fails.
std::string expect_kv(const std::string& tok, const std::string& key, int line) {
  auto eq = tok.find('=');
  if (eq == std::string::npos || tok.substr(0, eq) != key)
    parse_fail(line, "expected " + key + "=<value>, got '" + tok + "'");
  return tok.substr(eq + 1);
}

int parse_int(const std::string& v, int line) {
  try {
    size_t used = 0;
    int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    parse_fail(line, "expected an integer, got '" + v + "'");
  }
}

double parse_double(const std::string& v, int line) {
  try {
    size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    parse_fail(line, "expected a number, got '" + v + "'");
  }
}

Owner parse_owner(const std::string& v, int line) {
  if (v == "0") return Owner::P0;
  if (v == "1") return Owner::P1;
  if (v == "R") return Owner::Random;
  parse_fail(line, "owner must be 0, 1 or R");
}

struct RawGame {
  int rank = -1;
  GameBuilder builder;
  std::map<std::string, int> index;
  std::vector<Owner> owners;

  int state_of(const std::string& name, int line) {
    auto it = index.find(name);
    if (it == index.end()) parse_fail(line, "unknown state '" + name + "'");
    return it->second;
  }
};

}  // namespace

GameGraph parse_game_text(const std::string& text) {
  RawGame raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "game") {
      if (toks.size() != 2) parse_fail(lineno, "expected: game rank=<n>");
      raw.rank = parse_int(expect_kv(toks[1], "rank", lineno), lineno);
      if (raw.rank < 0) parse_fail(lineno, "rank must be non-negative");
      raw.builder.set_rank(raw.rank);
      saw_header = true;
    } else if (kw == "state") {
      if (!saw_header) parse_fail(lineno, "missing 'game rank=<n>' header");
      if (toks.size() != 4) parse_fail(lineno, "expected: state <name> owner=<0|1|R> color=<c>");
      const std::string& name = toks[1];
      if (raw.index.count(name)) parse_fail(lineno, "duplicate state '" + name + "'");
      Owner owner = parse_owner(expect_kv(toks[2], "owner", lineno), lineno);
      int color = parse_int(expect_kv(toks[3], "color", lineno), lineno);
      raw.index[name] = raw.builder.add_state(name, owner, color);
      raw.owners.push_back(owner);
    } else if (kw == "edge") {
      if (toks.size() != 4 || toks[2] != "->") parse_fail(lineno, "expected: edge <from> -> <to>");
      int from = raw.state_of(toks[1], lineno);
      int to = raw.state_of(toks[3], lineno);
      if (raw.owners[from] == Owner::Random)
        parse_fail(lineno, "random sources must use prob lines");
      raw.builder.add_edge(from, to);
    } else if (kw == "prob") {
      if (toks.size() != 5 || toks[2] != "->") parse_fail(lineno, "expected: prob <from> -> <to> <p>");
      int from = raw.state_of(toks[1], lineno);
      int to = raw.state_of(toks[3], lineno);
      if (raw.owners[from] != Owner::Random)
        parse_fail(lineno, "prob line from a non-random state");
      raw.builder.add_prob_edge(from, to, parse_double(toks[4], lineno));
    } else {
      parse_fail(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!saw_header) throw SgpsError(ErrorKind::invalid_input, "missing 'game rank=<n>' header");
  GameGraph g = raw.builder.finalize();
  require_valid(g);
  return g;
}

GameGraph parse_game_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SgpsError(ErrorKind::invalid_input, std::string("bad json: ") + e.what());
  }
  try {
    RawGame raw;
    raw.rank = j.at("rank").get<int>();
    if (raw.rank < 0) throw SgpsError(ErrorKind::invalid_input, "rank must be non-negative");
    raw.builder.set_rank(raw.rank);
    for (const auto& st : j.at("states")) {
      std::string name = st.at("name").get<std::string>();
      if (raw.index.count(name))
        throw SgpsError(ErrorKind::invalid_input, "duplicate state '" + name + "'");
      Owner owner = parse_owner(st.at("owner").get<std::string>(), 0);
      raw.index[name] = raw.builder.add_state(name, owner, st.at("color").get<int>());
      raw.owners.push_back(owner);
    }
    auto state_of = [&](const json& v) {
      auto it = raw.index.find(v.get<std::string>());
      if (it == raw.index.end())
        throw SgpsError(ErrorKind::invalid_input, "unknown state '" + v.get<std::string>() + "'");
      return it->second;
    };
    if (j.count("edges"))
      for (const auto& e : j.at("edges")) {
        int from = state_of(e.at("from"));
        if (raw.owners[from] == Owner::Random)
          throw SgpsError(ErrorKind::invalid_input, "random sources must use probs");
        raw.builder.add_edge(from, state_of(e.at("to")));
      }
    if (j.count("probs"))
      for (const auto& e : j.at("probs")) {
        int from = state_of(e.at("from"));
        if (raw.owners[from] != Owner::Random)
          throw SgpsError(ErrorKind::invalid_input, "prob entry from a non-random state");
        raw.builder.add_prob_edge(from, state_of(e.at("to")), e.at("p").get<double>());
      }
    GameGraph g = raw.builder.finalize();
    require_valid(g);
    return g;
  } catch (const json::exception& e) {
    throw SgpsError(ErrorKind::invalid_input, std::string("bad game json: ") + e.what());
  }
}

GameGraph load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SgpsError(ErrorKind::invalid_input, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return parse_game_json(buf.str());
  return parse_game_text(buf.str());
}

}  // namespace sgps
