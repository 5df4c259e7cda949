#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "shapebias/correlation.hpp"

namespace {

shapebias::ActivationPairSet make_pairs(std::size_t pairs, std::size_t neurons) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise;
  std::vector<double> a(pairs * neurons), b(pairs * neurons);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = noise(rng);
    b[k] = 0.5 * a[k] + noise(rng);
  }
  return {shapebias::Factor::Shape, pairs, neurons, std::move(a), std::move(b)};
}

template <shapebias::Backend backend>
void BM_FactorCorrelation(benchmark::State& state) {
  const auto pairs = make_pairs(static_cast<std::size_t>(state.range(0)),
                                static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(shapebias::factor_correlation(pairs, backend));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

}  // namespace

BENCHMARK(BM_FactorCorrelation<shapebias::Backend::Serial>)
    ->Args({1000, 512})->Args({1000, 4096})->Args({4000, 2048})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FactorCorrelation<shapebias::Backend::OpenMP>)
    ->Args({1000, 512})->Args({1000, 4096})->Args({4000, 2048})->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
