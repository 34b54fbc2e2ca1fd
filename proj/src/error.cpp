#include "ncflow/error.hpp"

namespace ncflow {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSize: return "invalid-size";
    case ErrorKind::NonconvexInput: return "nonconvex-input";
    case ErrorKind::ClosureViolation: return "closure-violation";
    case ErrorKind::DegenerateGeometry: return "degenerate-geometry";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::DegenerateTriangle: return "degenerate-triangle";
    case ErrorKind::NonconvexDetected: return "nonconvex-detected";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::ValidationError: return "validation-error";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace ncflow
