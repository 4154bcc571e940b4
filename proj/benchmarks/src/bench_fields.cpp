#include <benchmark/benchmark.h>

#include <random>

#include "mhn/montecarlo.hpp"
#include "mhn/patterns.hpp"

namespace {

// One full pass of local fields, dense O(N) per site against the O(k + p)
// overlap cache.
void BM_DenseFieldPass(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto patterns = mhn::PatternSet::generate(n, 1, n / 20, 7);
  const auto couplings = mhn::hebbian_couplings(patterns);
  std::mt19937_64 rng(1);
  const auto sigma = mhn::SpinConfiguration::random(n, rng);
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += mhn::local_field(sigma, couplings, i);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_DenseFieldPass)->Arg(500)->Arg(2000);

void BM_CachedFieldPass(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto patterns = mhn::PatternSet::generate(n, 1, n / 20, 7);
  std::mt19937_64 rng(1);
  mhn::FieldCache cache(patterns, mhn::SpinConfiguration::random(n, rng));
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += cache.field(i);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_CachedFieldPass)->Arg(500)->Arg(2000);

void BM_GlauberSweeps(benchmark::State& state) {
  mhn::McConfig cfg;
  cfg.n = static_cast<std::size_t>(state.range(0));
  cfg.alpha = 0.05;
  cfg.beta = 5.0;
  cfg.sweeps = 10;
  cfg.init = {mhn::InitKind::kPatternAligned, 1};
  cfg.seed = 3;
  const auto patterns = mhn::PatternSet::generate(cfg.n, cfg.k, cfg.gaussian_count(), cfg.seed);
  for (auto _ : state) benchmark::DoNotOptimize(mhn::run_dynamics(cfg, patterns));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.n * cfg.sweeps));
}
BENCHMARK(BM_GlauberSweeps)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
