#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hilbert {

enum class ErrorCode {
  InvalidInput,
  NonCollinear,
  DegenerateConfiguration,
  NumericalFailure,
  Singular,
  NotInterior,
  NotBoundary,
  TargetNotMet,
  UnknownExample,
  NotAnIsometry,
  NotUnitModulus,
  NotHyperbolic,
  DegeneratePencil,
  NotSupporting,
  SegmentNotInterior,
  OutsideRadialShadow,
  NotInStabilizer,
  NotC1Point,
  NotInCone,
  EmptySlice,
  ExplosionGuard,
  NoneFound,
  BudgetExhausted,
  HyperbolicPresent,
  DegenerateTriangle,
};

std::string_view to_string(ErrorCode code);

// True for failures of a computation on valid input (CLI exit code 3).
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hilbert
