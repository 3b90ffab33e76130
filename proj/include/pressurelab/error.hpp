#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pressurelab {

enum class ErrorCode {
  EnumerationBudgetExceeded,
  ScaleTooCoarse,
  InsufficientDepth,
  InadmissibleWord,
  ReducibleSystem,
  EmptyTarget,
  DepthTooShallow,
  NonInvariantMeasure,
  SchemaError,
  InvalidArgument,
  NumericalFailure,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Schema validation failure; lists every violation with its field path.
class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace pressurelab
