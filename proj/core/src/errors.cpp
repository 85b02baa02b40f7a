#include "hjb/errors.hpp"

namespace hjb {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonCoercive: return "NonCoercive";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorCode::BeyondBlowUp: return "BeyondBlowUp";
    case ErrorCode::NonPositiveR: return "NonPositiveR";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::MissingConstants: return "MissingConstants";
    case ErrorCode::MissingEnvelopes: return "MissingEnvelopes";
    case ErrorCode::ParameterInfeasible: return "ParameterInfeasible";
    case ErrorCode::DerivativeUnavailable: return "DerivativeUnavailable";
    case ErrorCode::NoWitnessFound: return "NoWitnessFound";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hjb
