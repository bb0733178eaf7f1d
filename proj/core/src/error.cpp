#include "cfuse/error.hpp"

namespace cfuse {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::AllVectorsNumericallyZero: return "AllVectorsNumericallyZero";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::NotADual: return "NotADual";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::FiberViolation: return "FiberViolation";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvariantError: return "InvariantError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace cfuse
