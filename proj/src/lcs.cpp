#include "sgps/lcs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sgps {

namespace {

std::uint64_t next_uid() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

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

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

int LcsSystem::control_index(const std::string& name) const {
  for (int s = 0; s < num_controls(); ++s)
    if (names_[s] == name) return s;
  return -1;
}

int LcsSystem::channel_index(const std::string& name) const {
  for (int c = 0; c < num_channels(); ++c)
    if (channels_[c] == name) return c;
  return -1;
}

int LcsSystem::message_index(char sym) const {
  for (int m = 0; m < num_messages(); ++m)
    if (messages_[m] == sym) return m;
  return -1;
}

int LcsSystem::max_color() const {
  int m = 0;
  for (int c : colors_) m = std::max(m, c);
  return m;
}

LcsSystemPtr parse_lcs(const std::string& text) {
  auto sys = std::make_shared<LcsSystem>();
  sys->source_ = text;
  sys->uid_ = next_uid();

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  std::vector<std::tuple<int, std::string, std::string, std::string>> raw_trans;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "lcs") {
      if (toks.size() != 3) parse_fail(lineno, "expected: lcs rank=<n> lambda=<float>");
      sys->rank_ = parse_int(expect_kv(toks[1], "rank", lineno), lineno);
      if (sys->rank_ < 0) parse_fail(lineno, "rank must be non-negative");
      sys->lambda_ = parse_double(expect_kv(toks[2], "lambda", lineno), lineno);
      if (!(sys->lambda_ > 0.0 && sys->lambda_ < 1.0))
        parse_fail(lineno, "lambda must be in (0,1)");
      saw_header = true;
    } else if (kw == "channels") {
      if (toks.size() < 2) parse_fail(lineno, "expected: channels <name>+");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (sys->channel_index(toks[i]) >= 0)
          parse_fail(lineno, "duplicate channel '" + toks[i] + "'");
        sys->channels_.push_back(toks[i]);
      }
    } else if (kw == "messages") {
      if (toks.size() < 2) parse_fail(lineno, "expected: messages <sym>+");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (toks[i].size() != 1) parse_fail(lineno, "message symbols must be single characters");
        char sym = toks[i][0];
        if (sym == '#') parse_fail(lineno, "'#' is reserved");
        if (sys->message_index(sym) >= 0)
          parse_fail(lineno, "duplicate message '" + toks[i] + "'");
        sys->messages_.push_back(sym);
      }
    } else if (kw == "state") {
      if (toks.size() != 4) parse_fail(lineno, "expected: state <name> player=<0|1> color=<c>");
      if (sys->control_index(toks[1]) >= 0)
        parse_fail(lineno, "duplicate state '" + toks[1] + "'");
      std::string pl = expect_kv(toks[2], "player", lineno);
      if (pl != "0" && pl != "1") parse_fail(lineno, "player must be 0 or 1");
      int color = parse_int(expect_kv(toks[3], "color", lineno), lineno);
      sys->names_.push_back(toks[1]);
      sys->owners_.push_back(pl == "0" ? Owner::P0 : Owner::P1);
      sys->colors_.push_back(color);
    } else if (kw == "trans") {
      if (toks.size() != 5 || toks[2] != "->")
        parse_fail(lineno, "expected: trans <from> -> <to> <op>");
      raw_trans.emplace_back(lineno, toks[1], toks[3], toks[4]);
    } else {
      parse_fail(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!saw_header)
    throw SgpsError(ErrorKind::invalid_input, "missing 'lcs rank=<n> lambda=<float>' header");
  if (sys->names_.empty()) throw SgpsError(ErrorKind::invalid_input, "no control states");
  if (sys->channels_.empty()) throw SgpsError(ErrorKind::invalid_input, "no channels declared");
  if (sys->messages_.empty()) throw SgpsError(ErrorKind::invalid_input, "no messages declared");
  for (int c : sys->colors_)
    if (c < 0 || c > sys->rank_)
      throw SgpsError(ErrorKind::invalid_input, "state color outside 0..rank");

  sys->per_control_.assign(sys->num_controls(), {});
  for (auto& [lno, from, to, op] : raw_trans) {
    LcsTransition t;
    t.from = sys->control_index(from);
    if (t.from < 0) parse_fail(lno, "unknown state '" + from + "'");
    t.to = sys->control_index(to);
    if (t.to < 0) parse_fail(lno, "unknown state '" + to + "'");
    if (op == "nop") {
      t.kind = OpKind::nop;
    } else {
      auto mark = op.find_first_of("!?");
      if (mark == std::string::npos || mark + 2 != op.size())
        parse_fail(lno, "operation must be <c>!<m>, <c>?<m> or nop");
      t.kind = (op[mark] == '!') ? OpKind::send : OpKind::recv;
      t.channel = sys->channel_index(op.substr(0, mark));
      if (t.channel < 0) parse_fail(lno, "unknown channel '" + op.substr(0, mark) + "'");
      t.message = sys->message_index(op[mark + 1]);
      if (t.message < 0) parse_fail(lno, std::string("unknown message '") + op[mark + 1] + "'");
    }
    sys->per_control_[t.from].push_back(int(sys->transitions_.size()));
    sys->transitions_.push_back(t);
  }
  return sys;
}

LcsSystemPtr load_lcs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SgpsError(ErrorKind::invalid_input, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lcs(buf.str());
}

ConcreteConfig parse_config_literal(const LcsSystem& sys, const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == '|') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 2 && parts.size() != 3)
    throw SgpsError(ErrorKind::invalid_input, "config literal needs 2 or 3 '|' sections");

  ConcreteConfig cfg;
  std::string ctrl = trim(parts[0]);
  cfg.ctrl = sys.control_index(ctrl);
  if (cfg.ctrl < 0) throw SgpsError(ErrorKind::invalid_input, "unknown state '" + ctrl + "'");
  cfg.channels.assign(sys.num_channels(), "");

  if (parts.size() == 3) {
    std::string chans = trim(parts[1]);
    if (!chans.empty()) {
      std::istringstream in(chans);
      std::string item;
      while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
          throw SgpsError(ErrorKind::invalid_input, "expected <chan>=<word> in '" + item + "'");
        int c = sys.channel_index(trim(item.substr(0, eq)));
        if (c < 0)
          throw SgpsError(ErrorKind::invalid_input, "unknown channel in '" + item + "'");
        std::string word = trim(item.substr(eq + 1));
        for (char sym : word)
          if (sys.message_index(sym) < 0)
            throw SgpsError(ErrorKind::invalid_input,
                            std::string("unknown message '") + sym + "'");
        cfg.channels[c] = word;
      }
    }
  }
  std::string phase = trim(parts.back());
  if (phase == "phase=0")
    cfg.phase = 0;
  else if (phase == "phase=1")
    cfg.phase = 1;
  else
    throw SgpsError(ErrorKind::invalid_input, "expected phase=<0|1>, got '" + phase + "'");
  return cfg;
}

std::string format_config_literal(const LcsSystem& sys, const ConcreteConfig& cfg) {
  std::string out = sys.control_name(cfg.ctrl) + " | ";
  for (int c = 0; c < sys.num_channels(); ++c) {
    if (c) out += ",";
    out += sys.channel_name(c) + "=" + cfg.channels[c];
  }
  out += " | phase=" + std::to_string(cfg.phase);
  return out;
}

bool subword_leq(const std::string& x, const std::string& y) {
  size_t i = 0;
  for (char ch : y) {
    if (i < x.size() && x[i] == ch) ++i;
  }
  return i == x.size();
}

unsigned long long embedding_count(const std::string& y, const std::string& x) {
  // ways[j]: embeddings of x[0..j) into the scanned prefix of y.
  std::vector<unsigned long long> ways(x.size() + 1, 0);
  ways[0] = 1;
  for (char ch : y)
    for (size_t j = x.size(); j >= 1; --j)
      if (x[j - 1] == ch) ways[j] += ways[j - 1];
  return ways[x.size()];
}

std::vector<PlayerMove> player_successors(const LcsSystem& sys, const ConcreteConfig& cfg,
                                          std::optional<int> send_cap) {
  if (cfg.phase != 1)
    throw SgpsError(ErrorKind::invalid_input, "player successors need a phase-1 config");
  std::vector<PlayerMove> out;
  for (int ti : sys.transitions_from(cfg.ctrl)) {
    const LcsTransition& t = sys.transitions()[ti];
    PlayerMove mv;
    mv.transition = ti;
    mv.to = cfg;
    mv.to.ctrl = t.to;
    mv.to.phase = 0;
    switch (t.kind) {
      case OpKind::nop:
        break;
      case OpKind::send: {
        std::string& w = mv.to.channels[t.channel];
        if (send_cap && int(w.size()) >= *send_cap) continue;  // cap-blocked
        w.push_back(sys.message_symbol(t.message));
        break;
      }
      case OpKind::recv: {
        std::string& w = mv.to.channels[t.channel];
        if (w.empty() || w[0] != sys.message_symbol(t.message)) continue;  // disabled
        w.erase(w.begin());
        break;
      }
    }
    out.push_back(std::move(mv));
  }
  if (out.empty()) {
    PlayerMove fb;
    fb.transition = -1;
    fb.to = cfg;
    fb.to.phase = 0;  // control stays put
    out.push_back(std::move(fb));
  }
  return out;
}

namespace {

struct ChannelSubwords {
  std::vector<std::string> words;                  // distinct subwords, sorted
  std::vector<unsigned long long> ways;            // parallel embedding counts
};

ChannelSubwords channel_subwords(const std::string& w) {
  std::set<std::string> seen;
  // Every keep-subset of positions; dedupe. Exponential, guarded by caller.
  size_t n = w.size();
  for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
    std::string sub;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t(1) << i)) sub.push_back(w[i]);
    seen.insert(sub);
  }
  ChannelSubwords out;
  for (const auto& s : seen) {
    out.words.push_back(s);
    out.ways.push_back(embedding_count(w, s));
  }
  return out;
}

}  // namespace

std::vector<LossOutcome> loss_distribution(const LcsSystem& sys, const ConcreteConfig& cfg,
                                           const Limits& limits) {
  if (cfg.phase != 0)
    throw SgpsError(ErrorKind::invalid_input, "loss distribution needs a phase-0 config");
  if (cfg.total_length() > limits.loss_len_cap)
    throw SgpsError(ErrorKind::cap_exceeded, "too-large: total channel length exceeds cap");

  std::vector<ChannelSubwords> per_channel;
  for (const std::string& w : cfg.channels) per_channel.push_back(channel_subwords(w));

  std::vector<LossOutcome> out;
  std::vector<size_t> idx(per_channel.size(), 0);
  double lam = sys.lambda();
  for (;;) {
    LossOutcome o;
    o.to.ctrl = cfg.ctrl;
    o.to.phase = 1;
    o.to.channels.resize(cfg.channels.size());
    for (size_t c = 0; c < per_channel.size(); ++c) {
      o.to.channels[c] = per_channel[c].words[idx[c]];
      o.ways *= per_channel[c].ways[idx[c]];
      o.kept += int(per_channel[c].words[idx[c]].size());
      o.lost += int(cfg.channels[c].size() - per_channel[c].words[idx[c]].size());
    }
    o.probability = double(o.ways) * std::pow(lam, o.lost) * std::pow(1.0 - lam, o.kept);
    out.push_back(std::move(o));

    size_t pos = 0;
    while (pos < idx.size()) {
      if (++idx[pos] < per_channel[pos].words.size()) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  return out;
}

bool attractor_contains(const ConcreteConfig& cfg) {
  for (const std::string& w : cfg.channels)
    if (!w.empty()) return false;
  return true;
}

namespace {

std::string config_key(const ConcreteConfig& cfg) {
  std::string key = std::to_string(cfg.ctrl) + "/" + std::to_string(cfg.phase);
  for (const std::string& w : cfg.channels) key += "|" + w;
  return key;
}

}  // namespace

int BoundedExpansion::id_of(const LcsSystem&, const ConcreteConfig& cfg) const {
  auto it = index.find(config_key(cfg));
  return it == index.end() ? -1 : it->second;
}

BoundedExpansion expand_bounded(const LcsSystem& sys, int k, int max_states) {
  if (k < 0) throw SgpsError(ErrorKind::invalid_input, "bound must be non-negative");

  // All words of length <= k in lexicographic-by-length order.
  std::vector<std::string> words{""};
  {
    size_t from = 0;
    for (int len = 1; len <= k; ++len) {
      size_t to = words.size();
      for (size_t i = from; i < to; ++i)
        for (int m = 0; m < sys.num_messages(); ++m)
          words.push_back(words[i] + sys.message_symbol(m));
      from = to;
    }
  }

  long long total = 2 * sys.num_controls();
  for (int c = 0; c < sys.num_channels(); ++c) {
    total *= (long long)words.size();
    if (total > max_states)
      throw SgpsError(ErrorKind::cap_exceeded, "bounded expansion exceeds the state cap");
  }

  BoundedExpansion out;
  out.bound = k;
  GameBuilder b;

  // Enumerate configs in a fixed order: ctrl-major, then channel words, then
  // phase; ids are dense in that order.
  std::vector<size_t> idx(sys.num_channels(), 0);
  for (int ctrl = 0; ctrl < sys.num_controls(); ++ctrl) {
    std::fill(idx.begin(), idx.end(), 0);
    for (;;) {
      for (int phase = 0; phase <= 1; ++phase) {
        ConcreteConfig cfg;
        cfg.ctrl = ctrl;
        cfg.phase = phase;
        for (size_t c = 0; c < idx.size(); ++c) cfg.channels.push_back(words[idx[c]]);
        Owner owner = phase == 0 ? Owner::Random : sys.control_owner(ctrl);
        int id = b.add_state(format_config_literal(sys, cfg), owner, sys.control_color(ctrl));
        out.index[config_key(cfg)] = id;
        out.configs.push_back(std::move(cfg));
      }
      size_t pos = 0;
      while (pos < idx.size()) {
        if (++idx[pos] < words.size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size() || idx.empty()) break;
    }
  }

  b.set_rank(std::max(sys.rank(), sys.max_color()));
  Limits loss_limits;
  loss_limits.loss_len_cap = std::max(loss_limits.loss_len_cap, k * std::max(sys.num_channels(), 1));
  for (size_t id = 0; id < out.configs.size(); ++id) {
    const ConcreteConfig& cfg = out.configs[id];
    if (cfg.phase == 1) {
      for (const PlayerMove& mv : player_successors(sys, cfg, k)) {
        int to = out.index.at(config_key(mv.to));
        b.add_edge(int(id), to);
      }
    } else {
      for (const LossOutcome& o : loss_distribution(sys, cfg, loss_limits)) {
        int to = out.index.at(config_key(o.to));
        b.add_prob_edge(int(id), to, o.probability);
      }
    }
  }
  out.game = b.finalize();
  require_valid(out.game);
  return out;
}

}  // namespace sgps
