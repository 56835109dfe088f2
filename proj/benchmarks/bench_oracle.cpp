#include <benchmark/benchmark.h>

#include <random>

#include "liqsched/oracle.hpp"
#include "liqsched/pattern.hpp"

namespace {

liqsched::LiquidityPattern random_atomic(int n) {
  liqsched::RawPattern raw;
  raw.kind = liqsched::PatternKind::Atomic;
  std::mt19937_64 rng(987);
  std::uniform_real_distribution<double> depth(0.5, 5.0);
  std::uniform_real_distribution<double> res(0.2, 1.5);
  for (int i = 0; i < n; ++i) {
    raw.times.push_back(0.4 * i);
    raw.depth.push_back(depth(rng));
    raw.resilience.push_back(res(rng));
  }
  raw.horizon = raw.times.back();
  raw.target = 1.0;
  return liqsched::LiquidityPattern::validate(raw);
}

void BM_LatticeBruteForce(benchmark::State& state) {
  const auto form = liqsched::cost_matrix(random_atomic(static_cast<int>(state.range(0))));
  const double h = 1.0 / static_cast<double>(state.range(1));
  for (auto _ : state) {
    auto result = liqsched::brute_force(form, 1.0, h);
    benchmark::DoNotOptimize(result.cost);
  }
}

void BM_ProjectedGradient(benchmark::State& state) {
  const auto form = liqsched::cost_matrix(random_atomic(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    auto result = liqsched::projected_gradient(form, 1.0);
    benchmark::DoNotOptimize(result.cost);
  }
}

}  // namespace

BENCHMARK(BM_LatticeBruteForce)->Args({4, 120})->Args({6, 50});
BENCHMARK(BM_ProjectedGradient)->Arg(4)->Arg(6)->Arg(50);
