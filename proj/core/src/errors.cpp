#include "liqsched/errors.hpp"

namespace liqsched {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyMarket: return "EmptyMarket";
    case ErrorCode::NonMonotoneGrid: return "NonMonotoneGrid";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InfiniteImpact: return "InfiniteImpact";
    case ErrorCode::DivisionByZeroDepth: return "DivisionByZeroDepth";
    case ErrorCode::ZeroDepthNode: return "ZeroDepthNode";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidParams: return "InvalidParams";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace liqsched
