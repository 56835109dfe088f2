#include "liqsched/step_curve.hpp"

#include <algorithm>
#include <cmath>

#include "liqsched/errors.hpp"

namespace liqsched {

MonotoneStepCurve::MonotoneStepCurve(std::vector<double> breakpoints, std::vector<double> values,
                                     Continuity continuity, Direction direction)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      continuity_(continuity),
      direction_(direction) {
  if (breakpoints_.size() != values_.size()) {
    raise(ErrorCode::InvalidParams, "step curve needs one value per breakpoint");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      raise(ErrorCode::NonMonotoneGrid, "step curve breakpoints must be strictly increasing");
    }
    const bool ok = direction_ == Direction::Increasing ? values_[i] <= values_[i + 1]
                                                        : values_[i] >= values_[i + 1];
    if (!ok) {
      raise(ErrorCode::InvalidParams, "step curve values violate the declared direction");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) raise(ErrorCode::InvalidParams, "step curve value not finite");
  }
}

double MonotoneStepCurve::operator()(double x) const {
  if (breakpoints_.empty()) return 0.0;
  if (continuity_ == Continuity::RightContinuous) {
    // value of the last breakpoint <= x
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (it == breakpoints_.begin()) return values_.front();
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }
  // left-continuous: value of the first breakpoint >= x
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.end()) return values_.back();
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

}  // namespace liqsched
