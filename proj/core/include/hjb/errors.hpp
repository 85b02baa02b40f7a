#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hjb {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonCoercive,
  EmptyGrid,
  DegenerateGrid,
  CflViolation,
  NonFiniteValue,
  QuadratureDivergence,
  BeyondBlowUp,
  NonPositiveR,
  UnknownKind,
  UnknownPreset,
  MissingConstants,
  MissingEnvelopes,
  ParameterInfeasible,
  DerivativeUnavailable,
  NoWitnessFound,
  ConfigInvalid,
  MissingArtifact,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. All library failures are
/// reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hjb
