#pragma once

#include <stdexcept>
#include <string>

namespace sgps {

enum class ErrorKind {
  invalid_input,  // malformed files, bad literals, violated preconditions
  cap_exceeded,   // enumeration/DFA/iteration guards tripped
  query,          // not-winning-here, wrong-phase
  internal,       // broken invariant inside the solver
};

class SgpsError : public std::runtime_error {
 public:
  SgpsError(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Limits {
  int dfa_cap = 100000;    // hard ceiling on DFA states after determinization
  int iter_cap = 10000;    // hard ceiling on fixpoint rounds
  int loss_len_cap = 12;   // max total channel length for loss enumeration
  long long enum_cap = 10000000;  // strategy-space ceiling for the oracle
};

}  // namespace sgps
