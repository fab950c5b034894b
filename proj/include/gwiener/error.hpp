#pragma once

#include <stdexcept>
#include <string>

namespace gwiener {

enum class ErrorCode {
  InvalidArgument,
  NonSymmetric,
  NegativeWeight,
  NonzeroDiagonal,
  DisconnectedAfterRetries,
  DimensionMismatch,
  ConvergenceFailure,
  NonFiniteKernelValue,
  IndexOutOfRange,
  EmptySampleSet,
  DuplicateVertex,
  KExceedsN,
  NotDivisible,
  NonUnitaryReduced,
  SingularGram,
  SingularCrossGram,
  ZeroDenominator,
  KernelNotPositive,
  AllTrialsFailed,
  UnknownKernel,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::DisconnectedAfterRetries: return "DisconnectedAfterRetries";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NonFiniteKernelValue: return "NonFiniteKernelValue";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptySampleSet: return "EmptySampleSet";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::KExceedsN: return "KExceedsN";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::NonUnitaryReduced: return "NonUnitaryReduced";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::SingularCrossGram: return "SingularCrossGram";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::KernelNotPositive: return "KernelNotPositive";
    case ErrorCode::AllTrialsFailed: return "AllTrialsFailed";
    case ErrorCode::UnknownKernel: return "UnknownKernel";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to CLI exit code 3.
inline bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::DisconnectedAfterRetries:
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::SingularGram:
    case ErrorCode::SingularCrossGram:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::AllTrialsFailed:
    case ErrorCode::NonFiniteKernelValue:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gwiener
