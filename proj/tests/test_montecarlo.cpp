#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mhn/error.hpp"
#include "mhn/exact.hpp"
#include "mhn/montecarlo.hpp"
#include "mhn/observables.hpp"

using namespace mhn;

namespace {

McConfig base_config(std::size_t n, double alpha, double beta, std::size_t sweeps, std::uint64_t seed) {
  McConfig cfg;
  cfg.n = n;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.sweeps = sweeps;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(LocalField, TwoNeurons) {
  CouplingMatrix j(2);
  j.set(0, 1, 0.5);
  EXPECT_DOUBLE_EQ(local_field(SpinConfiguration::all_up(2), j, 0), 0.5);
  EXPECT_THROW(local_field(SpinConfiguration::all_up(2), j, 2), ShapeError);
  EXPECT_THROW(local_field(SpinConfiguration::all_up(3), j, 0), ShapeError);
}

TEST(LocalField, AlignedState) {
  const auto ps = PatternSet::generate(25, 1, 0, 3);
  const auto sigma = SpinConfiguration::aligned_with(ps.boolean_row(0));
  const auto j = hebbian_couplings(ps);
  for (std::size_t i = 0; i < 25; ++i) {
    EXPECT_NEAR(local_field(sigma, j, i), ps.boolean_row(0)[i] * 24.0 / 25.0, 1e-14);
  }
}

TEST(LocalField, IncrementalMatchesDense) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ps = PatternSet::generate(60, 2, 12, seed);
    const auto j = hebbian_couplings(ps);
    FieldCache cache(ps, SpinConfiguration::random(60, rng));
    std::uniform_int_distribution<std::size_t> site(0, 59);
    for (int step = 0; step < 500; ++step) {
      const std::size_t i = site(rng);
      ASSERT_NEAR(cache.field(i), local_field(cache.state(), j, i), 1e-10);
      cache.flip(i);
    }
    EXPECT_NEAR(cache.energy(), mixed_hamiltonian(cache.state(), ps), 1e-10);
    EXPECT_NEAR(cache.boolean_mattis(1), mattis_magnetization(cache.state(), ps.boolean_row(1)), 1e-14);
  }
}

TEST(McConfig, Validation) {
  auto cfg = base_config(10, 0.0, 1.0, 10, 1);
  EXPECT_NO_THROW(cfg.validate());
  cfg.thermalization_fraction = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = base_config(10, 0.0, 1.0, 0, 1);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = base_config(10, 0.0, 1.0, 10, 1);
  cfg.init = {InitKind::kPatternAligned, 2};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.init = {InitKind::kRandom, 1};
  cfg.n_replicas = 3;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(RunDynamics, RejectsInconsistentLoad) {
  const auto cfg = base_config(100, 0.05, 1.0, 10, 1);  // wants p = 5
  EXPECT_THROW(run_dynamics(cfg, PatternSet::generate(100, 1, 4, 1)), ShapeError);
  EXPECT_THROW(run_dynamics(cfg, PatternSet::generate(99, 1, 5, 1)), ShapeError);
}

TEST(RunDynamics, CurieWeissRetrieval) {
  const auto cfg = base_config(500, 0.0, 5.0, 400, 2);
  const auto r = run_dynamics(cfg, PatternSet::generate(500, 1, 0, 2));
  EXPECT_GT(r.mattis[0].mean, 0.95);
  EXPECT_NEAR(r.mattis[0].mean, 0.9999091217152325, 0.02);
  EXPECT_GE(r.mattis[0].error, 0.0);
}

TEST(RunDynamics, HotParamagnet) {
  auto cfg = base_config(2000, 0.05, 0.01, 200, 3);
  cfg.k = 2;
  cfg.init = {InitKind::kRandom, 1};
  cfg.n_replicas = 2;
  const auto r = run_dynamics(cfg, PatternSet::generate(2000, 2, 100, 3));
  for (const auto& m : r.mattis) EXPECT_LT(m.mean, 0.05);
  ASSERT_TRUE(r.q12.has_value());
  EXPECT_LT(std::abs(r.q12->mean), 0.05);
}

TEST(RunDynamics, Deterministic) {
  auto cfg = base_config(200, 0.1, 2.0, 100, 8);
  cfg.n_replicas = 2;
  cfg.energy_trace_stride = 5;
  const auto ps = PatternSet::generate(200, 1, 20, 8);
  const auto a = run_dynamics(cfg, ps);
  const auto b = run_dynamics(cfg, ps);
  EXPECT_EQ(a.mattis[0].mean, b.mattis[0].mean);
  EXPECT_EQ(a.mattis[0].error, b.mattis[0].error);
  EXPECT_EQ(a.q12->mean, b.q12->mean);
  EXPECT_EQ(a.energy.mean, b.energy.mean);
  EXPECT_EQ(a.energy_trace, b.energy_trace);
  EXPECT_EQ(a.energy_trace.size(), 10u);
  EXPECT_EQ(a.samples, 50u);
}

TEST(RunDynamics, GaugeCovariance) {
  auto cfg = base_config(150, 0.1, 1.5, 200, 4);
  cfg.init = {InitKind::kAllUp, 1};
  const auto ps = PatternSet::generate(150, 1, 15, 4);
  std::vector<Spin> flipped(ps.boolean_data().begin(), ps.boolean_data().end());
  for (auto& s : flipped) s = static_cast<Spin>(-s);
  const auto mirror = PatternSet::from_matrices(
      150, 1, flipped, 15, std::vector<double>(ps.gaussian_data().begin(), ps.gaussian_data().end()));
  const auto a = run_dynamics(cfg, ps);
  const auto b = run_dynamics(cfg, mirror);
  EXPECT_EQ(a.mattis_signed[0].mean, -b.mattis_signed[0].mean);
  EXPECT_EQ(a.energy.mean, b.energy.mean);
}

TEST(RunDynamics, ReplicasLockAtLowTemperature) {
  auto cfg = base_config(300, 0.0, 20.0, 100, 5);
  cfg.n_replicas = 2;
  const auto r = run_dynamics(cfg, PatternSet::generate(300, 1, 0, 5));
  ASSERT_TRUE(r.q12.has_value());
  EXPECT_GT(r.q12->mean, 0.99);
  EXPECT_LE(r.q12->mean, 1.0);
}

TEST(RunDynamics, MetropolisAcceptance) {
  auto cfg = base_config(100, 0.0, 0.5, 50, 6);
  cfg.rule = UpdateRule::kMetropolis;
  const auto r = run_dynamics(cfg, PatternSet::generate(100, 1, 0, 6));
  EXPECT_GT(r.acceptance_rate, 0.0);
  EXPECT_LE(r.acceptance_rate, 1.0);
}

TEST(StateFrequencies, MatchGibbsAtSmallN) {
  auto cfg = base_config(6, 1.0 / 6.0, 1.0, 200000, 12);
  cfg.init = {InitKind::kRandom, 1};
  cfg.thermalization_fraction = 0.01;
  const auto ps = PatternSet::generate(6, 1, 1, 12);
  const auto freq = empirical_state_frequencies(cfg, ps);
  const auto exact = boltzmann_probabilities(ps, 1.0);
  double worst = 0.0;
  for (std::size_t s = 0; s < exact.size(); ++s) worst = std::max(worst, std::abs(freq[s] - exact[s]));
  EXPECT_LT(worst, 0.005);
}

TEST(StateFrequencies, SizeBound) {
  const auto cfg = base_config(21, 0.0, 1.0, 10, 1);
  EXPECT_THROW(empirical_state_frequencies(cfg, PatternSet::generate(21, 1, 0, 1)), SizeError);
}

TEST(RetrievalTrial, InsideRetrievalRegion) { EXPECT_GT(retrieval_trial(2000, 0.05, 1, 5.0, 500, 1), 0.8); }

TEST(RetrievalTrial, AboveRetrievalTemperature) { EXPECT_LT(retrieval_trial(2000, 0.05, 1, 0.5, 500, 1), 0.2); }

TEST(RetrievalVerdict, Thresholds) {
  EXPECT_EQ(classify_retrieval(0.95), RetrievalVerdict::kRetrieved);
  EXPECT_EQ(classify_retrieval(0.8), RetrievalVerdict::kRetrieved);
  EXPECT_EQ(classify_retrieval(0.5), RetrievalVerdict::kAmbiguous);
  EXPECT_EQ(classify_retrieval(0.2), RetrievalVerdict::kNotRetrieved);
  EXPECT_EQ(classify_retrieval(0.5, 0.1, 0.4), RetrievalVerdict::kRetrieved);
  EXPECT_THROW(classify_retrieval(0.5, 0.8, 0.2), std::invalid_argument);
  EXPECT_EQ(to_string(RetrievalVerdict::kNotRetrieved), "not-retrieved");
}
