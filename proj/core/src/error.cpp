#include "lde/error.hpp"

namespace lde {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kDegenerateRange: return "degenerate-range";
    case ErrorCode::kEmptyData: return "empty-data";
    case ErrorCode::kDivisionGuard: return "division-guard";
    case ErrorCode::kIllPosedPair: return "ill-posed-pair";
    case ErrorCode::kNoDataForState: return "no-data-for-state";
    case ErrorCode::kInvalidRadius: return "invalid-radius";
    case ErrorCode::kDegenerateRadius: return "degenerate-radius";
    case ErrorCode::kUndefinedCorrelation: return "undefined-correlation";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace lde
