#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace dst {

enum class ErrorCode {
  InvalidArgument,
  IndexOutOfRange,
  SelfLoop,
  DuplicateEdge,
  NonpositiveWeight,
  Disconnected,
  NoConvergence,
  Singular,
  SameNode,
  Unstable,
  NoInteriorOptimum,
  InfeasibleStart,
  CaseDomainViolation,
  NumericalBlowup,
  ZeroIdeal,
  Parse,
  Io,
};

const char* to_string(ErrorCode code);

// Single exception type for the library. `step` is set for errors raised
// mid-simulation so callers can report where a run stopped.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> step = std::nullopt)
      : std::runtime_error(what), code_(code), step_(step) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> step_;
};

}  // namespace dst
