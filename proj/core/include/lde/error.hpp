#pragma once

#include <stdexcept>
#include <string>

namespace lde {

enum class ErrorCode {
  kDimension,
  kDegenerateRange,
  kEmptyData,
  kDivisionGuard,
  kIllPosedPair,
  kNoDataForState,
  kInvalidRadius,
  kDegenerateRadius,
  kUndefinedCorrelation,
  kInfeasible,
  kInvalidArgument,
  kParse,
  kSchema,
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lde
