#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qh {

enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  DimensionTooLarge,
  Unbounded,
  EmptyBody,
  Infeasible,
  NumericalFailure,
  DirectionMismatch,
  RankDeficientDirections,
  HalfSphereViolation,
  DegenerateInput,
  NoFiniteEps,
  TooManySubsets,
  TooManyTransversals,
  TheoremArityMismatch,
  SearchExhausted,
  SearchFailed,
  NotFound,
  ContainmentAuditFailed,
  PreconditionFailed,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qh
