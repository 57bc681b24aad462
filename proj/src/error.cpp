#include "qlocality/error.hpp"

namespace qloc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MarginalMismatch: return "MarginalMismatch";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::UnknownChannel: return "UnknownChannel";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotSemicausal: return "NotSemicausal";
    case ErrorKind::AutonomyExtractionFailed: return "AutonomyExtractionFailed";
    case ErrorKind::LocalMapNotAutonomous: return "LocalMapNotAutonomous";
    case ErrorKind::FactorizationFailed: return "FactorizationFailed";
    case ErrorKind::NotFactorizable: return "NotFactorizable";
    case ErrorKind::ReconstructionFailed: return "ReconstructionFailed";
    case ErrorKind::UdcViolation: return "UdcViolation";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<double> residual)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      residual_(residual) {}

}  // namespace qloc
