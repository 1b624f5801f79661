#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bicycle {

enum class ErrorKind {
  DimensionMismatch,
  InvalidPolygon,
  DegenerateLine,
  WrongArity,
  DegenerateMonodromy,
  NoRealFixedPoint,
  PoleAtEllEqualsA,
  ProjectiveDenominatorZero,
  EllipticMonodromy,
  IdentityMonodromy,
  ClosureFailure,
  ZeroArea,
  SignAssignmentFailure,
  PoleOnChain,
  ChordTooLong,
  NotConcentricAlternating,
  NotCyclic,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit status without parsing messages.
class BicycleError : public std::runtime_error {
 public:
  BicycleError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bicycle
