#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "liqsched/envelope.hpp"
#include "liqsched/pattern.hpp"

namespace {

liqsched::LiquidityPattern fluctuating_pattern(int cells) {
  liqsched::RawPattern raw;
  raw.kind = liqsched::PatternKind::PiecewiseConstant;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> depth(0.2, 5.0);
  std::uniform_real_distribution<double> res(0.2, 2.0);
  for (int i = 0; i < cells; ++i) {
    raw.times.push_back(static_cast<double>(i));
    raw.depth.push_back(depth(rng));
    raw.resilience.push_back(res(rng));
  }
  raw.horizon = static_cast<double>(cells);
  raw.target = 1.0;
  return liqsched::LiquidityPattern::validate(raw);
}

void BM_BuildEnvelope(benchmark::State& state) {
  const auto pattern = fluctuating_pattern(8);
  const auto sampled =
      liqsched::sample_pattern(pattern, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto env = liqsched::build_envelope(sampled);
    benchmark::DoNotOptimize(env.l2_sq);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(sampled.size()));
}

void BM_Sampling(benchmark::State& state) {
  const auto pattern = fluctuating_pattern(8);
  for (auto _ : state) {
    auto sampled = liqsched::sample_pattern(pattern, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(sampled.times.data());
  }
}

}  // namespace

BENCHMARK(BM_BuildEnvelope)->Arg(250)->Arg(1000)->Arg(4000);
BENCHMARK(BM_Sampling)->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
