#pragma once

#include <stdexcept>
#include <string>

namespace liqsched {

enum class ErrorCode {
  EmptyMarket,
  NonMonotoneGrid,
  NegativeValue,
  NoConvergence,
  InfiniteImpact,
  DivisionByZeroDepth,
  ZeroDepthNode,
  TooLarge,
  InvalidParams,
};

const char* to_string(ErrorCode code);

/// Domain error carrying one of the library's error codes. The CLI maps these
/// to exit status 1; I/O problems are reported separately.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace liqsched
