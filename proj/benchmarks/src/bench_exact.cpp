#include <benchmark/benchmark.h>

#include "mhn/exact.hpp"
#include "mhn/patterns.hpp"

namespace {

void BM_ExactAhn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto patterns = mhn::PatternSet::generate(n, 1, 2, 11);
  for (auto _ : state) benchmark::DoNotOptimize(mhn::partition_ahn_exact(patterns, 0.5));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ExactAhn)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ExactPairwise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto patterns = mhn::PatternSet::generate(n, 1, 2, 11);
  for (auto _ : state) benchmark::DoNotOptimize(mhn::partition_pairwise_exact(patterns, 0.5));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ExactPairwise)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_RbmQuadrature(benchmark::State& state) {
  const auto patterns = mhn::PatternSet::generate(10, 1, 2, 11);
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mhn::partition_rbm_quadrature(patterns, 0.5, nodes));
}
BENCHMARK(BM_RbmQuadrature)->Arg(32)->Arg(96)->Unit(benchmark::kMillisecond);

}  // namespace
