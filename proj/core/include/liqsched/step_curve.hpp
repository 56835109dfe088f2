#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace liqsched {

enum class Continuity { RightContinuous, LeftContinuous };
enum class Direction { Increasing, Decreasing };

/// Monotone piecewise-constant function of one variable (time, or the
/// envelope abscissa k).
///
/// A right-continuous curve takes values[i] on [breakpoints[i], breakpoints[i+1]);
/// a left-continuous curve takes values[i] on (breakpoints[i-1], breakpoints[i]].
/// Evaluation outside the breakpoint span clamps to the first/last value, so a
/// left-continuous density over (0, k_top] evaluates at 0 to its value just
/// right of 0.
class MonotoneStepCurve {
 public:
  MonotoneStepCurve() = default;
  MonotoneStepCurve(std::vector<double> breakpoints, std::vector<double> values,
                    Continuity continuity, Direction direction);

  double operator()(double x) const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  Continuity continuity() const { return continuity_; }
  Direction direction() const { return direction_; }
  std::size_t size() const { return breakpoints_.size(); }
  bool empty() const { return breakpoints_.empty(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  Continuity continuity_ = Continuity::RightContinuous;
  Direction direction_ = Direction::Increasing;
};

}  // namespace liqsched
