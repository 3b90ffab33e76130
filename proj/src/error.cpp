#include "pressurelab/error.hpp"

namespace pressurelab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::ScaleTooCoarse: return "ScaleTooCoarse";
    case ErrorCode::InsufficientDepth: return "InsufficientDepth";
    case ErrorCode::InadmissibleWord: return "InadmissibleWord";
    case ErrorCode::ReducibleSystem: return "ReducibleSystem";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::DepthTooShallow: return "DepthTooShallow";
    case ErrorCode::NonInvariantMeasure: return "NonInvariantMeasure";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {
std::string join_violations(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}
}  // namespace

SchemaError::SchemaError(std::vector<std::string> violations)
    : Error(ErrorCode::SchemaError, join_violations(violations)),
      violations_(std::move(violations)) {}

}  // namespace pressurelab
