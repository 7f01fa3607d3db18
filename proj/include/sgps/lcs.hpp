#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgps/game.hpp"

namespace sgps {

enum class OpKind { send, recv, nop };

struct LcsTransition {
  int from = 0;
  int to = 0;
  OpKind kind = OpKind::nop;
  int channel = -1;  // -1 for nop
  int message = -1;
};

// Finite control with unbounded lossy FIFO channels; two players own the
// control states and every message is lost independently with rate lambda
// per step.
class LcsSystem {
 public:
  int num_controls() const { return int(owners_.size()); }
  Owner control_owner(int s) const { return owners_[s]; }  // P0 or P1
  int control_color(int s) const { return colors_[s]; }
  const std::string& control_name(int s) const { return names_[s]; }
  int control_index(const std::string& name) const;

  int num_channels() const { return int(channels_.size()); }
  const std::string& channel_name(int c) const { return channels_[c]; }
  int channel_index(const std::string& name) const;

  int num_messages() const { return int(messages_.size()); }
  char message_symbol(int m) const { return messages_[m]; }
  int message_index(char sym) const;

  const std::vector<LcsTransition>& transitions() const { return transitions_; }
  const std::vector<int>& transitions_from(int ctrl) const { return per_control_[ctrl]; }

  double lambda() const { return lambda_; }
  int rank() const { return rank_; }
  int max_color() const;
  const std::string& source_text() const { return source_; }
  std::uint64_t uid() const { return uid_; }

 private:
  friend std::shared_ptr<const LcsSystem> parse_lcs(const std::string& text);
  std::vector<Owner> owners_;
  std::vector<int> colors_;
  std::vector<std::string> names_;
  std::vector<std::string> channels_;
  std::vector<char> messages_;
  std::vector<LcsTransition> transitions_;
  std::vector<std::vector<int>> per_control_;
  double lambda_ = 0.5;
  int rank_ = 0;
  std::string source_;
  std::uint64_t uid_ = 0;
};

using LcsSystemPtr = std::shared_ptr<const LcsSystem>;

LcsSystemPtr parse_lcs(const std::string& text);
LcsSystemPtr load_lcs_file(const std::string& path);

// A single state of the induced game: control, one word per channel, and the
// phase bit (1: the owner moves, 0: losses are resolved).
struct ConcreteConfig {
  int ctrl = 0;
  std::vector<std::string> channels;
  int phase = 1;

  bool operator==(const ConcreteConfig& o) const {
    return ctrl == o.ctrl && phase == o.phase && channels == o.channels;
  }
  int total_length() const {
    int n = 0;
    for (const auto& w : channels) n += int(w.size());
    return n;
  }
};

// Literal syntax: "<ctrl> | <chan>=<word>(,<chan>=<word>)* | phase=<0|1>";
// the channel section may be omitted or partial (missing channels are empty).
ConcreteConfig parse_config_literal(const LcsSystem& sys, const std::string& text);
std::string format_config_literal(const LcsSystem& sys, const ConcreteConfig& cfg);

// Subword order: x arises from y by deleting zero or more positions.
bool subword_leq(const std::string& x, const std::string& y);
// Number of position subsets of y whose deletion yields x (i.e. occurrences
// of x as a scattered subsequence of y).
unsigned long long embedding_count(const std::string& y, const std::string& x);

struct PlayerMove {
  int transition = -1;  // index into sys.transitions(), -1 for the fallback
  ConcreteConfig to;    // phase 0
};

// Successors of a phase-1 config: one per enabled transition, or the single
// fallback edge when nothing is enabled. `send_cap` disables sends that would
// push a channel beyond the bound (used by the bounded expansion only).
std::vector<PlayerMove> player_successors(const LcsSystem& sys, const ConcreteConfig& cfg,
                                          std::optional<int> send_cap = std::nullopt);

struct LossOutcome {
  ConcreteConfig to;             // phase 1
  unsigned long long ways = 1;   // a
  int lost = 0;                  // b
  int kept = 0;                  // c
  double probability = 0;        // a * lambda^b * (1-lambda)^c
};

// Full loss distribution of a phase-0 config; exponential in the total
// channel length, so guarded by limits.loss_len_cap.
std::vector<LossOutcome> loss_distribution(const LcsSystem& sys, const ConcreteConfig& cfg,
                                           const Limits& limits = {});

// The finite attractor: all channels empty.
bool attractor_contains(const ConcreteConfig& cfg);

// Explicit game over every config with per-channel length <= k. Sends that
// would exceed k are treated as disabled, which can trigger the fallback
// edge; an approximation harness, not the true semantics.
struct BoundedExpansion {
  GameGraph game;
  std::vector<ConcreteConfig> configs;      // state id -> config
  std::map<std::string, int> index;         // literal key -> state id
  int bound = 0;

  int id_of(const LcsSystem& sys, const ConcreteConfig& cfg) const;
};
BoundedExpansion expand_bounded(const LcsSystem& sys, int k, int max_states = 200000);

}  // namespace sgps
