#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncflow {

enum class ErrorKind {
  InvalidSize,
  NonconvexInput,
  ClosureViolation,
  DegenerateGeometry,
  InsufficientData,
  NotConverged,
  DegenerateTriangle,
  NonconvexDetected,
  NumericalFailure,
  ParseError,
  ValidationError,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ncflow
