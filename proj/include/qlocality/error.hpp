#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qloc {

enum class ErrorKind {
  DimensionMismatch,
  UnknownLabel,
  InvalidArgument,
  MarginalMismatch,
  NotPSD,
  NotTracePreserving,
  UnknownChannel,
  PreconditionFailed,
  NotSemicausal,
  AutonomyExtractionFailed,
  LocalMapNotAutonomous,
  FactorizationFailed,
  NotFactorizable,
  ReconstructionFailed,
  UdcViolation,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library. `residual` carries the measured
/// deviation for structural failures so callers can tell numerical
/// marginality from a genuine failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> residual = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> residual() const noexcept { return residual_; }

 private:
  ErrorKind kind_;
  std::optional<double> residual_;
};

}  // namespace qloc
