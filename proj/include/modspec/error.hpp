#pragma once

#include <stdexcept>
#include <string>

namespace modspec {

enum class ErrorKind {
  NonPositiveDim,
  WeightMismatch,
  ShapeMismatch,
  NotHermitian,
  NoConvergence,
  NotProjection,
  RankDeficient,
  NotOrthonormal,
  NotStrictlyPositive,
  SolverFailure,
  NonPositiveEps,
  TraceMismatchUnresolvable,
  InvalidPartition,
  TooLarge,
  BadFlux,
  GridTooSmall,
  InvalidArgument,
  ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace modspec
