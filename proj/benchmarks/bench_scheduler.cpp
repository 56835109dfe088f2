#include <benchmark/benchmark.h>

#include "liqsched/cost.hpp"
#include "liqsched/pattern.hpp"
#include "liqsched/scheduler.hpp"

namespace {

liqsched::LiquidityPattern ow_pattern() {
  liqsched::RawPattern raw;
  raw.kind = liqsched::PatternKind::PiecewiseConstant;
  raw.times = {0.0};
  raw.depth = {1.0};
  raw.resilience = {1.0};
  raw.horizon = 2.0;
  raw.target = 1.0;
  return liqsched::LiquidityPattern::validate(raw);
}

void BM_OptimalScheduleOW(benchmark::State& state) {
  const auto pattern = ow_pattern();
  liqsched::SchedulerOptions options;
  options.samples_per_cell = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto schedule = liqsched::optimal_schedule(pattern, options);
    benchmark::DoNotOptimize(schedule.total);
  }
}

void BM_CostEvaluation(benchmark::State& state) {
  const auto pattern = ow_pattern();
  liqsched::SchedulerOptions options;
  options.samples_per_cell = static_cast<int>(state.range(0));
  const auto schedule = liqsched::optimal_schedule(pattern, options);
  for (auto _ : state) {
    benchmark::DoNotOptimize(liqsched::execution_cost_value(pattern, schedule, 0.0));
  }
}

}  // namespace

BENCHMARK(BM_OptimalScheduleOW)->Arg(250)->Arg(1000)->Arg(4000);
BENCHMARK(BM_CostEvaluation)->Arg(1000);
