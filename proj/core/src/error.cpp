#include "hilbert/error.hpp"

namespace hilbert {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonCollinear: return "NonCollinear";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NotBoundary: return "NotBoundary";
    case ErrorCode::TargetNotMet: return "TargetNotMet";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::NotAnIsometry: return "NotAnIsometry";
    case ErrorCode::NotUnitModulus: return "NotUnitModulus";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::DegeneratePencil: return "DegeneratePencil";
    case ErrorCode::NotSupporting: return "NotSupporting";
    case ErrorCode::SegmentNotInterior: return "SegmentNotInterior";
    case ErrorCode::OutsideRadialShadow: return "OutsideRadialShadow";
    case ErrorCode::NotInStabilizer: return "NotInStabilizer";
    case ErrorCode::NotC1Point: return "NotC1Point";
    case ErrorCode::NotInCone: return "NotInCone";
    case ErrorCode::EmptySlice: return "EmptySlice";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::NoneFound: return "NoneFound";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::HyperbolicPresent: return "HyperbolicPresent";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericalFailure:
    case ErrorCode::TargetNotMet:
    case ErrorCode::ExplosionGuard:
    case ErrorCode::NoneFound:
    case ErrorCode::BudgetExhausted:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace hilbert
