#include "sgps/symbolic.hpp"

#include <algorithm>

#include "nlohmann/json.hpp"

namespace sgps {

using nlohmann::json;

int separator_symbol(const LcsSystem& sys) { return sys.num_messages(); }

Word encode_channels(const LcsSystem& sys, const std::vector<std::string>& channels) {
  Word w;
  int sep = separator_symbol(sys);
  for (size_t c = 0; c < channels.size(); ++c) {
    if (c) w.push_back(sep);
    for (char sym : channels[c]) {
      int m = sys.message_index(sym);
      if (m < 0) throw SgpsError(ErrorKind::invalid_input, "message outside the alphabet");
      w.push_back(m);
    }
  }
  return w;
}

Dfa shape_dfa(const LcsSystem& sys) {
  int alphabet = sys.num_messages() + 1;
  int sep = sys.num_messages();
  int k = sys.num_channels();
  Dfa d;
  d.alphabet_size = alphabet;
  d.delta.assign(k, std::vector<int>(alphabet, -1));
  d.accepting.assign(k, false);
  for (int j = 0; j < k; ++j) {
    for (int m = 0; m < sep; ++m) d.delta[j][m] = j;
    if (j + 1 < k) d.delta[j][sep] = j + 1;
  }
  d.accepting[k - 1] = true;
  return minimize_trim(d);
}

const Dfa* SymbolicRegion::slot(int ctrl, int phase) const {
  auto it = slots_.find({ctrl, phase});
  return it == slots_.end() ? nullptr : &it->second;
}

void SymbolicRegion::set_slot(int ctrl, int phase, Dfa d) {
  if (d.empty_language())
    slots_.erase({ctrl, phase});
  else
    slots_[{ctrl, phase}] = std::move(d);
}

namespace {

void check_same_system(const SymbolicRegion& a, const SymbolicRegion& b) {
  if (!a.system() || !b.system() || a.system()->uid() != b.system()->uid())
    throw SgpsError(ErrorKind::invalid_input, "symbolic regions over different systems");
}

}  // namespace

SymbolicRegion sym_empty(LcsSystemPtr sys) { return SymbolicRegion(std::move(sys)); }

SymbolicRegion sym_full(LcsSystemPtr sys) {
  SymbolicRegion r(sys);
  Dfa shape = shape_dfa(*sys);
  for (int s = 0; s < sys->num_controls(); ++s)
    for (int phase = 0; phase <= 1; ++phase) r.set_slot(s, phase, shape);
  return r;
}

SymbolicRegion sym_from_literals(LcsSystemPtr sys, const std::vector<ConcreteConfig>& configs,
                                 int dfa_cap) {
  SymbolicRegion r(sys);
  int alphabet = sys->num_messages() + 1;
  for (const ConcreteConfig& cfg : configs) {
    Dfa one = minimize_trim(dfa_from_word(alphabet, encode_channels(*sys, cfg.channels)));
    const Dfa* cur = r.slot(cfg.ctrl, cfg.phase);
    r.set_slot(cfg.ctrl, cfg.phase, cur ? dfa_union(*cur, one, dfa_cap) : std::move(one));
  }
  return r;
}

SymbolicRegion sym_union(const SymbolicRegion& a, const SymbolicRegion& b, int dfa_cap) {
  check_same_system(a, b);
  SymbolicRegion out = a;
  for (const auto& [key, d] : b.slots()) {
    const Dfa* cur = out.slot(key.first, key.second);
    out.set_slot(key.first, key.second, cur ? dfa_union(*cur, d, dfa_cap) : d);
  }
  return out;
}

SymbolicRegion sym_intersect(const SymbolicRegion& a, const SymbolicRegion& b, int dfa_cap) {
  check_same_system(a, b);
  SymbolicRegion out(a.system());
  for (const auto& [key, d] : a.slots()) {
    const Dfa* other = b.slot(key.first, key.second);
    if (other) out.set_slot(key.first, key.second, dfa_intersect(d, *other, dfa_cap));
  }
  return out;
}

SymbolicRegion sym_minus(const SymbolicRegion& a, const SymbolicRegion& b, int dfa_cap) {
  check_same_system(a, b);
  SymbolicRegion out(a.system());
  for (const auto& [key, d] : a.slots()) {
    const Dfa* other = b.slot(key.first, key.second);
    out.set_slot(key.first, key.second, other ? dfa_difference(d, *other, dfa_cap) : d);
  }
  return out;
}

SymbolicRegion sym_complement(const SymbolicRegion& a, int dfa_cap) {
  const LcsSystemPtr& sys = a.system();
  SymbolicRegion out(sys);
  Dfa shape = shape_dfa(*sys);
  for (int s = 0; s < sys->num_controls(); ++s)
    for (int phase = 0; phase <= 1; ++phase) {
      const Dfa* d = a.slot(s, phase);
      out.set_slot(s, phase, d ? dfa_difference(shape, *d, dfa_cap) : shape);
    }
  return out;
}

bool sym_is_empty(const SymbolicRegion& a) { return a.slots().empty(); }

bool sym_equals(const SymbolicRegion& a, const SymbolicRegion& b) {
  check_same_system(a, b);
  return a.slots() == b.slots();
}

bool sym_subset(const SymbolicRegion& a, const SymbolicRegion& b, int dfa_cap) {
  return sym_is_empty(sym_minus(a, b, dfa_cap));
}

bool sym_member(const SymbolicRegion& a, const ConcreteConfig& cfg) {
  const Dfa* d = a.slot(cfg.ctrl, cfg.phase);
  if (!d) return false;
  return d->accepts(encode_channels(*a.system(), cfg.channels));
}

SymbolicRegion sym_random_part(const SymbolicRegion& a) {
  SymbolicRegion out(a.system());
  for (const auto& [key, d] : a.slots())
    if (key.second == 0) out.set_slot(key.first, key.second, d);
  return out;
}

SymbolicRegion sym_player_part(const SymbolicRegion& a, int player) {
  SymbolicRegion out(a.system());
  for (const auto& [key, d] : a.slots())
    if (key.second == 1 && a.system()->control_owner(key.first) == player_owner(player))
      out.set_slot(key.first, key.second, d);
  return out;
}

int sym_max_color(const SymbolicRegion& a) {
  int m = -1;
  for (const auto& [key, d] : a.slots())
    m = std::max(m, a.system()->control_color(key.first));
  return m;
}

SymbolicRegion up_closure(const SymbolicRegion& a, int dfa_cap) {
  SymbolicRegion out(a.system());
  int messages = a.system()->num_messages();
  for (const auto& [key, d] : a.slots()) {
    Nfa nfa = nfa_of(d);
    for (int q = 0; q < nfa.num_states(); ++q)
      for (Symbol m = 0; m < messages; ++m) nfa.add_transition(q, m, q);
    out.set_slot(key.first, key.second, canonical_dfa(nfa, dfa_cap));
  }
  return out;
}

namespace {

// Words in slot (t.from, 1) whose t-successor valuation lands in `target`
// (the DFA stored at slot (t.to, 0)). For sends the successor appends the
// message at the end of the channel's section; the construction runs the
// target DFA and virtually consumes that message when the section closes.
// For receives the successor drops the section's leading message, so the
// source word must start the section with it, skipped by the construction.
Dfa pre_send_dfa(const LcsSystem& sys, const Dfa& target, int channel, int message,
                 int dfa_cap) {
  if (target.empty_language()) return Dfa{sys.num_messages() + 1, {}, {}};
  int k = sys.num_channels();
  int sep = separator_symbol(sys);
  int alphabet = sep + 1;
  Nfa nfa;
  nfa.alphabet_size = alphabet;
  auto id = [&](int q, int j) { return q * k + j; };
  for (int q = 0; q < target.num_states(); ++q)
    for (int j = 0; j < k; ++j) nfa.add_state();
  nfa.initial = {id(0, 0)};
  for (int q = 0; q < target.num_states(); ++q) {
    for (Symbol m = 0; m < sep; ++m) {
      int t = target.delta[q][m];
      if (t < 0) continue;
      for (int j = 0; j < k; ++j) nfa.add_transition(id(q, j), m, id(t, j));
    }
    for (int j = 0; j + 1 < k; ++j) {
      if (j == channel) {
        int q1 = target.delta[q][message];
        if (q1 < 0) continue;
        int q2 = target.delta[q1][sep];
        if (q2 < 0) continue;
        nfa.add_transition(id(q, j), sep, id(q2, j + 1));
      } else {
        int t = target.delta[q][sep];
        if (t >= 0) nfa.add_transition(id(q, j), sep, id(t, j + 1));
      }
    }
    if (channel == k - 1) {
      int q1 = target.delta[q][message];
      nfa.accepting[id(q, k - 1)] = q1 >= 0 && target.accepting[q1];
    } else {
      nfa.accepting[id(q, k - 1)] = target.accepting[q];
    }
  }
  return canonical_dfa(nfa, dfa_cap);
}

Dfa pre_recv_dfa(const LcsSystem& sys, const Dfa& target, int channel, int message,
                 int dfa_cap) {
  if (target.empty_language()) return Dfa{sys.num_messages() + 1, {}, {}};
  int k = sys.num_channels();
  int sep = separator_symbol(sys);
  int alphabet = sep + 1;
  Nfa nfa;
  nfa.alphabet_size = alphabet;
  // flag 1: the section's leading message has not been read yet.
  auto id = [&](int q, int j, int flag) { return (q * k + j) * 2 + flag; };
  for (int q = 0; q < target.num_states(); ++q)
    for (int j = 0; j < k; ++j) {
      nfa.add_state();
      nfa.add_state();
    }
  nfa.initial = {id(0, 0, channel == 0 ? 1 : 0)};
  for (int q = 0; q < target.num_states(); ++q) {
    for (int j = 0; j < k; ++j) {
      // Waiting for the leading message: only `message` may appear, and the
      // target automaton does not move.
      nfa.add_transition(id(q, j, 1), message, id(q, j, 0));
      for (Symbol m = 0; m < sep; ++m) {
        int t = target.delta[q][m];
        if (t >= 0) nfa.add_transition(id(q, j, 0), m, id(t, j, 0));
      }
      if (j + 1 < k) {
        int t = target.delta[q][sep];
        if (t >= 0)
          nfa.add_transition(id(q, j, 0), sep, id(t, j + 1, j + 1 == channel ? 1 : 0));
      }
    }
    nfa.accepting[id(q, k - 1, 0)] = target.accepting[q];
  }
  return canonical_dfa(nfa, dfa_cap);
}

}  // namespace

SymbolicRegion pre_transition(const SymbolicRegion& a, int transition, int dfa_cap) {
  const LcsSystemPtr& sys = a.system();
  if (transition < 0 || transition >= int(sys->transitions().size()))
    throw SgpsError(ErrorKind::invalid_input, "transition not in system");
  const LcsTransition& t = sys->transitions()[transition];
  SymbolicRegion out(sys);
  const Dfa* target = a.slot(t.to, 0);
  if (!target) return out;
  switch (t.kind) {
    case OpKind::nop:
      out.set_slot(t.from, 1, *target);
      break;
    case OpKind::send:
      out.set_slot(t.from, 1, pre_send_dfa(*sys, *target, t.channel, t.message, dfa_cap));
      break;
    case OpKind::recv:
      out.set_slot(t.from, 1, pre_recv_dfa(*sys, *target, t.channel, t.message, dfa_cap));
      break;
  }
  return out;
}

SymbolicRegion pre_loss(const SymbolicRegion& a, int dfa_cap) {
  // (s,x,0) -> (s,x',1) for every x' <= x: predecessors are the superwords.
  SymbolicRegion out(a.system());
  SymbolicRegion up = up_closure(a, dfa_cap);
  for (const auto& [key, d] : up.slots())
    if (key.second == 1) out.set_slot(key.first, 0, d);
  return out;
}

SymbolicRegion deadlock_set(LcsSystemPtr sys, int dfa_cap) {
  SymbolicRegion out(sys);
  Dfa shape = shape_dfa(*sys);
  int sep = separator_symbol(*sys);
  int alphabet = sep + 1;
  for (int s = 0; s < sys->num_controls(); ++s) {
    bool always_enabled = false;
    std::vector<const LcsTransition*> recvs;
    for (int ti : sys->transitions_from(s)) {
      const LcsTransition& t = sys->transitions()[ti];
      if (t.kind == OpKind::recv)
        recvs.push_back(&t);
      else
        always_enabled = true;  // nop and send are enabled everywhere
    }
    if (always_enabled) continue;
    Dfa dead = shape;
    for (const LcsTransition* t : recvs) {
      // Words whose section `t->channel` starts with the message.
      Dfa prefix;
      prefix.alphabet_size = alphabet;
      int done = t->channel + 1;
      prefix.delta.assign(done + 1, std::vector<int>(alphabet, -1));
      prefix.accepting.assign(done + 1, false);
      for (int j = 0; j < t->channel; ++j) {
        for (Symbol m = 0; m < sep; ++m) prefix.delta[j][m] = j;
        prefix.delta[j][sep] = j + 1;
      }
      prefix.delta[t->channel][t->message] = done;
      for (Symbol m = 0; m < alphabet; ++m) prefix.delta[done][m] = done;
      prefix.accepting[done] = true;
      Dfa enabled = dfa_intersect(minimize_trim(prefix), shape, dfa_cap);
      dead = dfa_difference(dead, enabled, dfa_cap);
      if (dead.empty_language()) break;
    }
    out.set_slot(s, 1, std::move(dead));
  }
  return out;
}

SymbolicRegion pre_fallback(const SymbolicRegion& a, int dfa_cap) {
  // (s,x,1) -> (s,x,0) exists exactly on deadlocked valuations.
  SymbolicRegion out(a.system());
  SymbolicRegion dead = deadlock_set(a.system(), dfa_cap);
  for (const auto& [key, d] : dead.slots()) {
    const Dfa* target = a.slot(key.first, 0);
    if (!target) continue;
    out.set_slot(key.first, 1, dfa_intersect(d, *target, dfa_cap));
  }
  return out;
}

namespace {

SymbolicRegion pre_exists_raw(const SymbolicRegion& a, int dfa_cap) {
  const LcsSystemPtr& sys = a.system();
  SymbolicRegion out = pre_loss(a, dfa_cap);
  out = sym_union(out, pre_fallback(a, dfa_cap), dfa_cap);
  for (int t = 0; t < int(sys->transitions().size()); ++t)
    out = sym_union(out, pre_transition(a, t, dfa_cap), dfa_cap);
  return out;
}

}  // namespace

SymbolicRegion pre_exists_sym(const SymbolicRegion& a, const SymbolicRegion& restriction,
                              int dfa_cap) {
  check_same_system(a, restriction);
  SymbolicRegion inside = sym_intersect(a, restriction, dfa_cap);
  return sym_intersect(pre_exists_raw(inside, dfa_cap), restriction, dfa_cap);
}

SymbolicRegion pre_forall_sym(const SymbolicRegion& a, const SymbolicRegion& restriction,
                              int dfa_cap) {
  // Dual form: inside the subgame, all successors in `a` is the complement
  // of reaching the subgame's complement of `a`.
  check_same_system(a, restriction);
  SymbolicRegion escape = sym_minus(restriction, a, dfa_cap);
  return sym_minus(restriction, pre_exists_sym(escape, restriction, dfa_cap), dfa_cap);
}

json dfa_to_json(const LcsSystem& sys, const Dfa& d) {
  json j;
  json alphabet = json::array();
  for (int m = 0; m < sys.num_messages(); ++m)
    alphabet.push_back(std::string(1, sys.message_symbol(m)));
  alphabet.push_back("#");
  j["alphabet"] = alphabet;
  j["states"] = d.num_states();
  j["initial"] = d.num_states() > 0 ? 0 : -1;
  json acc = json::array();
  for (int q = 0; q < d.num_states(); ++q)
    if (d.accepting[q]) acc.push_back(q);
  j["accepting"] = acc;
  json trans = json::array();
  for (int q = 0; q < d.num_states(); ++q)
    for (Symbol a = 0; a < d.alphabet_size; ++a)
      if (d.delta[q][a] >= 0)
        trans.push_back(json::array({q, alphabet[a], d.delta[q][a]}));
  j["transitions"] = trans;
  return j;
}

Dfa dfa_from_json(const LcsSystem& sys, const json& j) {
  try {
    Dfa d;
    d.alphabet_size = sys.num_messages() + 1;
    int n = j.at("states").get<int>();
    d.delta.assign(n, std::vector<int>(d.alphabet_size, -1));
    d.accepting.assign(n, false);
    for (const auto& q : j.at("accepting")) d.accepting.at(q.get<int>()) = true;
    for (const auto& t : j.at("transitions")) {
      std::string sym = t.at(1).get<std::string>();
      int a = sym == "#" ? sys.num_messages() : sys.message_index(sym.at(0));
      if (a < 0) throw SgpsError(ErrorKind::invalid_input, "unknown symbol in automaton");
      d.delta.at(t.at(0).get<int>()).at(a) = t.at(2).get<int>();
    }
    return d;
  } catch (const json::exception& e) {
    throw SgpsError(ErrorKind::invalid_input, std::string("bad automaton json: ") + e.what());
  }
}

json region_to_json(const SymbolicRegion& r) {
  json slots = json::object();
  for (const auto& [key, d] : r.slots()) {
    std::string name =
        r.system()->control_name(key.first) + "/" + std::to_string(key.second);
    slots[name] = dfa_to_json(*r.system(), d);
  }
  return json{{"slots", slots}};
}

SymbolicRegion region_from_json(LcsSystemPtr sys, const json& j) {
  try {
    SymbolicRegion r(sys);
    for (const auto& [name, dj] : j.at("slots").items()) {
      auto slash = name.rfind('/');
      if (slash == std::string::npos)
        throw SgpsError(ErrorKind::invalid_input, "bad slot key " + name);
      int ctrl = sys->control_index(name.substr(0, slash));
      if (ctrl < 0) throw SgpsError(ErrorKind::invalid_input, "bad slot key " + name);
      std::string phase_str = name.substr(slash + 1);
      if (phase_str != "0" && phase_str != "1")
        throw SgpsError(ErrorKind::invalid_input, "bad slot key " + name);
      // Re-canonicalize: legitimate bundles are untouched (the form is a
      // fixpoint), edited ones become safe to compare.
      r.set_slot(ctrl, phase_str == "1" ? 1 : 0, minimize_trim(dfa_from_json(*sys, dj)));
    }
    return r;
  } catch (const json::exception& e) {
    throw SgpsError(ErrorKind::invalid_input, std::string("bad region json: ") + e.what());
  }
}

}  // namespace sgps
