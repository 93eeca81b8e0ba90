#pragma once

#include <stdexcept>
#include <string>

namespace qchaos {

enum class ErrorKind {
  InvalidDimension,
  InvalidParameter,
  NumericInput,
  DiagonalizationFailure,
  Shape,
  InvalidDensityMatrix,
  InsufficientData,
  Domain,
  DegenerateVector,
  Io,
  Config,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid dimension";
    case ErrorKind::InvalidParameter: return "invalid parameter";
    case ErrorKind::NumericInput: return "non-finite numeric input";
    case ErrorKind::DiagonalizationFailure: return "diagonalization failure";
    case ErrorKind::Shape: return "shape mismatch";
    case ErrorKind::InvalidDensityMatrix: return "invalid density matrix";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::DegenerateVector: return "degenerate vector";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Config: return "config error";
  }
  return "unknown error";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qchaos
