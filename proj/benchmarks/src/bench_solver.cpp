#include <benchmark/benchmark.h>

#include <cmath>

#include "mhn/phase_diagram.hpp"
#include "mhn/quadrature.hpp"
#include "mhn/rs_solver.hpp"

namespace {

void BM_HermiteRuleConstruction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mhn::compute_gauss_hermite(n));
}
BENCHMARK(BM_HermiteRuleConstruction)->Arg(64)->Arg(256);

void BM_TanhSquaredHermite(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto f = [](double x) { return std::pow(std::tanh(0.5 + x), 2); };
  for (auto _ : state) benchmark::DoNotOptimize(mhn::gaussian_expectation(f, n));
}
BENCHMARK(BM_TanhSquaredHermite)->Arg(64)->Arg(256);

void BM_TanhSquaredKinkPanels(benchmark::State& state) {
  const double s = static_cast<double>(state.range(0));
  auto f = [s](double x) { return std::pow(std::tanh(s * (0.1 + x)), 2); };
  for (auto _ : state) benchmark::DoNotOptimize(mhn::gaussian_expectation_split(f, -0.1, s, 16));
}
BENCHMARK(BM_TanhSquaredKinkPanels)->Arg(1)->Arg(50);

void BM_SolveRetrieval(benchmark::State& state) {
  const double beta = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mhn::solve_fixed_point(0.05, beta, {1.0, 1.0, 0.0}));
}
BENCHMARK(BM_SolveRetrieval)->Arg(2)->Arg(5)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_EnumerateBranches(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mhn::enumerate_branches(0.05, 5.0));
}
BENCHMARK(BM_EnumerateBranches)->Unit(benchmark::kMillisecond);

void BM_ExistenceBoundary(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mhn::retrieval_existence_boundary(50.0));
}
BENCHMARK(BM_ExistenceBoundary)->Unit(benchmark::kMillisecond);

void BM_ScanGridSerial(benchmark::State& state) {
  mhn::GridSpec grid;
  grid.alpha_points = 5;
  grid.beta_points = 5;
  for (auto _ : state) benchmark::DoNotOptimize(mhn::scan_grid(grid, {}, 1));
}
BENCHMARK(BM_ScanGridSerial)->Unit(benchmark::kMillisecond);

}  // namespace
