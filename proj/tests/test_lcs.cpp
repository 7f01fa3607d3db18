#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "sgps/lcs.hpp"

using namespace sgps;

namespace {

const char* kMinimal =
    "lcs rank=0 lambda=0.5\n"
    "channels c\n"
    "messages m\n"
    "state idle player=0 color=0\n"
    "trans idle -> idle nop\n";

const char* kProducerConsumer =
    "lcs rank=1 lambda=0.5\n"
    "channels c\n"
    "messages a\n"
    "state q0 player=0 color=0\n"
    "state q1 player=1 color=1\n"
    "trans q0 -> q1 c!a\n"
    "trans q1 -> q0 c?a\n";

// Brute-force multiplicity: count deletion subsets of y yielding x.
unsigned long long subset_count(const std::string& y, const std::string& x) {
  unsigned long long count = 0;
  for (size_t mask = 0; mask < (size_t(1) << y.size()); ++mask) {
    std::string kept;
    for (size_t i = 0; i < y.size(); ++i)
      if (mask & (size_t(1) << i)) kept.push_back(y[i]);
    if (kept == x) ++count;
  }
  return count;
}

std::string random_word(std::mt19937_64& rng, int max_len, int alphabet) {
  int len = int(rng() % std::uint64_t(max_len + 1));
  std::string w;
  for (int i = 0; i < len; ++i) w.push_back(char('a' + rng() % std::uint64_t(alphabet)));
  return w;
}

}  // namespace

TEST_CASE("lcs parsing and validation") {
  LcsSystemPtr sys = parse_lcs(kMinimal);
  CHECK(sys->num_controls() == 1);
  CHECK(sys->num_channels() == 1);
  CHECK(sys->lambda() == 0.5);
  CHECK(sys->rank() == 0);
  CHECK(sys->transitions().size() == 1);

  CHECK_THROWS_WITH_AS(
      (void)parse_lcs("lcs rank=0 lambda=1.0\nchannels c\nmessages m\n"
                      "state s player=0 color=0\ntrans s -> s nop\n"),
      "line 1: lambda must be in (0,1)", SgpsError);
  CHECK_THROWS_WITH_AS(
      (void)parse_lcs("lcs rank=0 lambda=0.5\nchannels c\nmessages m\n"
                      "state s player=0 color=0\ntrans s -> s d!m\n"),
      "line 5: unknown channel 'd'", SgpsError);
  CHECK_THROWS_AS((void)parse_lcs("lcs rank=0 lambda=0.5\nchannels c\nmessages m\n"
                                  "state s player=0 color=0\nstate s player=1 color=0\n"),
                  SgpsError);
}

TEST_CASE("config literals round trip") {
  LcsSystemPtr sys = parse_lcs(kProducerConsumer);
  ConcreteConfig cfg = parse_config_literal(*sys, "q1 | c=aa | phase=0");
  CHECK(cfg.ctrl == 1);
  CHECK(cfg.channels == std::vector<std::string>{"aa"});
  CHECK(cfg.phase == 0);
  CHECK(format_config_literal(*sys, cfg) == "q1 | c=aa | phase=0");

  // Missing channels default to empty; two-section form allowed.
  ConcreteConfig c2 = parse_config_literal(*sys, "q0 | phase=1");
  CHECK(c2.channels == std::vector<std::string>{""});
  ConcreteConfig c3 = parse_config_literal(*sys, " q0 |  | phase=1");
  CHECK(c3 == c2);

  CHECK_THROWS_AS((void)parse_config_literal(*sys, "zz | phase=1"), SgpsError);
  CHECK_THROWS_AS((void)parse_config_literal(*sys, "q0 | c=xy | phase=1"), SgpsError);
}

TEST_CASE("subword order and embedding counts") {
  CHECK(subword_leq("ab", "xaybz"));
  CHECK_FALSE(subword_leq("ba", "ab"));
  CHECK(subword_leq("", "abc"));
  CHECK(embedding_count("aba", "aa") == 1);
  CHECK(embedding_count("aaa", "aa") == 3);
  CHECK(embedding_count("abc", "abc") == 1);

  std::mt19937_64 rng(101);
  for (int round = 0; round < 300; ++round) {
    std::string y = random_word(rng, 8, 3);
    std::string x = random_word(rng, 4, 3);
    CHECK(embedding_count(y, x) == subset_count(y, x));
    CHECK((embedding_count(y, x) > 0) == subword_leq(x, y));
  }
}

TEST_CASE("player successors follow the three rules plus fallback") {
  LcsSystemPtr sys = parse_lcs(kProducerConsumer);

  // recv disabled on an empty channel: only the fallback remains.
  ConcreteConfig stuck = parse_config_literal(*sys, "q1 | c= | phase=1");
  auto moves = player_successors(*sys, stuck);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].transition == -1);
  CHECK(moves[0].to == parse_config_literal(*sys, "q1 | c= | phase=0"));

  // send appends and switches control.
  ConcreteConfig send = parse_config_literal(*sys, "q0 | c=a | phase=1");
  auto m2 = player_successors(*sys, send);
  REQUIRE(m2.size() == 1);
  CHECK(m2[0].to == parse_config_literal(*sys, "q1 | c=aa | phase=0"));

  // recv consumes the head.
  ConcreteConfig recv = parse_config_literal(*sys, "q1 | c=aa | phase=1");
  auto m3 = player_successors(*sys, recv);
  REQUIRE(m3.size() == 1);
  CHECK(m3[0].to == parse_config_literal(*sys, "q0 | c=a | phase=0"));

  // Two enabled transitions yield two successors, in declaration order.
  LcsSystemPtr sys2 = parse_lcs(
      "lcs rank=0 lambda=0.5\nchannels c\nmessages a b\n"
      "state q player=0 color=0\n"
      "trans q -> q c?a\n"
      "trans q -> q nop\n");
  ConcreteConfig two = parse_config_literal(*sys2, "q | c=ab | phase=1");
  auto m4 = player_successors(*sys2, two);
  REQUIRE(m4.size() == 2);
  CHECK(m4[0].to.channels[0] == "b");
  CHECK(m4[1].to.channels[0] == "ab");
}

TEST_CASE("loss distribution matches the closed form") {
  LcsSystemPtr sys = parse_lcs(kProducerConsumer);
  double lam = sys->lambda();

  ConcreteConfig cfg = parse_config_literal(*sys, "q0 | c=aa | phase=0");
  auto outcomes = loss_distribution(*sys, cfg);
  REQUIRE(outcomes.size() == 3);
  double p_keep2 = -1, p_keep1 = -1, p_keep0 = -1;
  for (const auto& o : outcomes) {
    CHECK(o.to.phase == 1);
    CHECK(o.to.ctrl == cfg.ctrl);
    if (o.to.channels[0] == "aa") p_keep2 = o.probability;
    if (o.to.channels[0] == "a") p_keep1 = o.probability;
    if (o.to.channels[0].empty()) p_keep0 = o.probability;
  }
  CHECK(p_keep2 == doctest::Approx((1 - lam) * (1 - lam)));
  CHECK(p_keep1 == doctest::Approx(2 * lam * (1 - lam)));
  CHECK(p_keep0 == doctest::Approx(lam * lam));

  // Empty channels: the single identity outcome with probability one.
  ConcreteConfig empty = parse_config_literal(*sys, "q0 | c= | phase=0");
  auto single = loss_distribution(*sys, empty);
  REQUIRE(single.size() == 1);
  CHECK(single[0].probability == 1.0);
  CHECK(single[0].ways == 1);

  // Cap guard.
  Limits tight;
  tight.loss_len_cap = 1;
  CHECK_THROWS_AS((void)loss_distribution(*sys, cfg, tight), SgpsError);
}

TEST_CASE("loss distribution multiplies across channels") {
  LcsSystemPtr sys = parse_lcs(
      "lcs rank=0 lambda=0.3\nchannels c d\nmessages a b\n"
      "state q player=0 color=0\n"
      "trans q -> q nop\n");
  double lam = 0.3;
  ConcreteConfig cfg = parse_config_literal(*sys, "q | c=a,d=b | phase=0");
  auto outcomes = loss_distribution(*sys, cfg);
  REQUIRE(outcomes.size() == 4);
  for (const auto& o : outcomes)
    if (o.to.channels[0] == "a" && o.to.channels[1].empty())
      CHECK(o.probability == doctest::Approx((1 - lam) * lam));
}

TEST_CASE("loss normalization and multiplicities on random valuations") {
  LcsSystemPtr sys = parse_lcs(
      "lcs rank=0 lambda=0.5\nchannels c d\nmessages a b x\n"
      "state q player=0 color=0\n"
      "trans q -> q nop\n");
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 60; ++round) {
    ConcreteConfig cfg;
    cfg.ctrl = 0;
    cfg.phase = 0;
    cfg.channels = {random_word(rng, 3, 3), random_word(rng, 3, 3)};
    auto outcomes = loss_distribution(*sys, cfg);
    double total = 0;
    for (const auto& o : outcomes) {
      total += o.probability;
      unsigned long long expect = 1;
      for (size_t c = 0; c < cfg.channels.size(); ++c)
        expect *= subset_count(cfg.channels[c], o.to.channels[c]);
      CHECK(o.ways == expect);
      // Per-channel product identity for the exponents.
      int lost = 0, kept = 0;
      for (size_t c = 0; c < cfg.channels.size(); ++c) {
        lost += int(cfg.channels[c].size() - o.to.channels[c].size());
        kept += int(o.to.channels[c].size());
      }
      CHECK(o.lost == lost);
      CHECK(o.kept == kept);
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("attractor membership is exactly the empty-channel set") {
  LcsSystemPtr sys = parse_lcs(kProducerConsumer);
  CHECK(attractor_contains(parse_config_literal(*sys, "q0 | c= | phase=0")));
  CHECK(attractor_contains(parse_config_literal(*sys, "q1 | c= | phase=1")));
  CHECK_FALSE(attractor_contains(parse_config_literal(*sys, "q0 | c=a | phase=1")));
}

TEST_CASE("bounded expansion shapes") {
  LcsSystemPtr minimal = parse_lcs(kMinimal);
  BoundedExpansion e0 = expand_bounded(*minimal, 0);
  CHECK(e0.game.num_states() == 2);  // (ctrl, empty, phase) for one control

  BoundedExpansion e1 = expand_bounded(*minimal, 1);
  CHECK(e1.game.num_states() == 4);  // (empty | m) x (phase 0 | 1)
  CHECK(validate(e1.game).empty());

  LcsSystemPtr pc = parse_lcs(kProducerConsumer);
  BoundedExpansion e2 = expand_bounded(*pc, 2);
  CHECK(validate(e2.game).empty());
  // Bipartite: every edge flips the phase bit.
  for (int s = 0; s < e2.game.num_states(); ++s)
    for (int t : e2.game.successors(s))
      CHECK(e2.configs[s].phase != e2.configs[t].phase);
  // Round trip through the index.
  ConcreteConfig probe = parse_config_literal(*pc, "q1 | c=aa | phase=0");
  int id = e2.id_of(*pc, probe);
  REQUIRE(id >= 0);
  CHECK(e2.configs[id] == probe);

  CHECK_THROWS_AS((void)expand_bounded(*pc, 12, 20), SgpsError);
}

TEST_CASE("phase alternation and sink-freeness of concrete successors") {
  LcsSystemPtr sys = parse_lcs(kProducerConsumer);
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 100; ++round) {
    ConcreteConfig cfg;
    cfg.ctrl = int(rng() % 2);
    cfg.phase = int(rng() % 2);
    cfg.channels = {random_word(rng, 4, 1)};
    if (cfg.phase == 1) {
      auto moves = player_successors(*sys, cfg);
      CHECK_FALSE(moves.empty());
      for (const auto& mv : moves) CHECK(mv.to.phase == 0);
    } else {
      auto outcomes = loss_distribution(*sys, cfg);
      CHECK_FALSE(outcomes.empty());
      for (const auto& o : outcomes) CHECK(o.to.phase == 1);
    }
  }
}
