#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mhn/error.hpp"
#include "mhn/observables.hpp"
#include "mhn/patterns.hpp"

using namespace mhn;

namespace {

PatternSet boolean_only(std::size_t n, std::vector<Spin> rows, std::size_t k = 1) {
  return PatternSet::from_matrices(n, k, std::move(rows), 0, {});
}

}  // namespace

TEST(Patterns, EmptyDisorder) {
  const auto ps = PatternSet::generate(4, 0, 0, 7);
  EXPECT_EQ(ps.n(), 4u);
  EXPECT_TRUE(ps.boolean_data().empty());
  EXPECT_TRUE(ps.gaussian_data().empty());
  EXPECT_DOUBLE_EQ(ps.self_interaction_shift(), 0.0);
}

TEST(Patterns, ZeroNeuronsRejected) { EXPECT_THROW(PatternSet::generate(0, 1, 1, 1), ShapeError); }

TEST(Patterns, RegenerationIsBitExact) {
  const auto a = PatternSet::generate(100, 2, 5, 1);
  const auto b = PatternSet::generate(100, 2, 5, 1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, PatternSet::generate(100, 2, 5, 2));
  for (Spin s : a.boolean_data()) EXPECT_TRUE(s == 1 || s == -1);
  EXPECT_EQ(a.boolean_data().size(), 200u);
  EXPECT_EQ(a.gaussian_data().size(), 500u);
}

TEST(Patterns, BooleanColumnMeansAreCentred) {
  // The mean of |column mean| over seeds should sit well inside 3/sqrt(N).
  double total = 0.0;
  std::size_t count = 0, outliers = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto ps = PatternSet::generate(100, 2, 5, seed);
    for (std::size_t nu = 0; nu < 2; ++nu) {
      double mean = 0.0;
      for (Spin s : ps.boolean_row(nu)) mean += s;
      mean /= 100.0;
      total += mean;
      ++count;
      if (std::abs(mean) > 0.3) ++outliers;
    }
  }
  EXPECT_LT(std::abs(total / static_cast<double>(count)), 3.0 / std::sqrt(100.0 * count));
  EXPECT_LT(outliers, 10u);  // P(|mean| > 3 sigma) ~ 0.3%
}

TEST(Patterns, GaussianMoments) {
  const auto ps = PatternSet::generate(1000, 0, 50, 11);
  double s1 = 0.0, s2 = 0.0;
  for (double x : ps.gaussian_data()) {
    s1 += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(ps.gaussian_data().size());
  EXPECT_NEAR(s1 / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.03);
}

TEST(Patterns, FromMatricesValidates) {
  EXPECT_THROW(PatternSet::from_matrices(3, 1, {1, 1}, 0, {}), ShapeError);
  EXPECT_THROW(PatternSet::from_matrices(2, 1, {1, 0}, 0, {}), ShapeError);
  EXPECT_THROW(PatternSet::from_matrices(2, 0, {}, 1, {0.5}), ShapeError);
}

TEST(SpinConfig, RejectsNonSpins) {
  EXPECT_THROW(SpinConfiguration({1, 0, -1}), ShapeError);
  const auto s = SpinConfiguration::from_index(5, 0b10110);
  EXPECT_EQ(s.to_index(), 0b10110u);
  EXPECT_EQ(s[0], -1);
  EXPECT_EQ(s[1], 1);
  EXPECT_EQ(s.flipped().to_index(), 0b01001u);
}

TEST(Couplings, TwoNeuronExamples) {
  EXPECT_DOUBLE_EQ(hebbian_couplings(boolean_only(2, {1, 1}))(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(hebbian_couplings(boolean_only(2, {1, -1}))(0, 1), -0.5);
}

TEST(Couplings, SymmetricZeroDiagonal) {
  const auto ps = PatternSet::generate(30, 2, 6, 5);
  const auto j = hebbian_couplings(ps);
  for (std::size_t a = 0; a < 30; ++a) {
    EXPECT_EQ(j(a, a), 0.0);
    for (std::size_t b = 0; b < 30; ++b) EXPECT_EQ(j(a, b), j(b, a));
  }
  // Spot-check one entry against the definition.
  double expect = 0.0;
  for (std::size_t nu = 0; nu < 2; ++nu) expect += ps.boolean_row(nu)[3] * ps.boolean_row(nu)[7];
  for (std::size_t mu = 0; mu < 6; ++mu) expect += ps.gaussian_row(mu)[3] * ps.gaussian_row(mu)[7];
  EXPECT_NEAR(j(3, 7), expect / 30.0, 1e-15);
}

TEST(Hamiltonian, AlignedState) {
  const auto ps = PatternSet::generate(20, 1, 0, 3);
  const auto sigma = SpinConfiguration::aligned_with(ps.boolean_row(0));
  EXPECT_NEAR(mixed_hamiltonian(sigma, ps), -(20.0 - 1.0) / 2.0, 1e-12);
}

TEST(Hamiltonian, EmptyDisorderIsZero) {
  const auto ps = PatternSet::generate(6, 0, 0, 3);
  std::mt19937_64 rng(1);
  EXPECT_EQ(mixed_hamiltonian(SpinConfiguration::random(6, rng), ps), 0.0);
}

TEST(Hamiltonian, ThreeNeuronHandValue) {
  const auto ps = boolean_only(3, {1, 1, -1});
  EXPECT_NEAR(mixed_hamiltonian(SpinConfiguration::all_up(3), ps), 1.0 / 3.0, 1e-15);
}

TEST(Hamiltonian, ShapeMismatch) {
  const auto ps = PatternSet::generate(4, 1, 1, 3);
  EXPECT_THROW(mixed_hamiltonian(SpinConfiguration::all_up(5), ps), ShapeError);
}

TEST(Hamiltonian, GaugeSymmetryAndShift) {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 5 + seed * 2;  // up to 43
    const auto ps = PatternSet::generate(n, 2, 3, seed);
    const auto sigma = SpinConfiguration::random(n, rng);
    const double h = mixed_hamiltonian(sigma, ps);
    EXPECT_NEAR(h, mixed_hamiltonian(sigma.flipped(), ps), 1e-12);
    EXPECT_NEAR(h, full_form_hamiltonian(sigma, ps) + ps.self_interaction_shift(), 1e-12);
  }
}

TEST(Hamiltonian, FullFormMatchesOverlapIdentity) {
  // -(1/2N) sum_{i,j} xi_i xi_j s_i s_j summed directly vs -(N/2) sum m^2.
  std::mt19937_64 rng(4);
  const auto ps = PatternSet::generate(50, 0, 4, 8);
  const auto sigma = SpinConfiguration::random(50, rng);
  double direct = 0.0;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const auto x = ps.gaussian_row(mu);
    for (std::size_t i = 0; i < 50; ++i) {
      for (std::size_t j = 0; j < 50; ++j) direct += x[i] * x[j] * sigma[i] * sigma[j];
    }
  }
  direct *= -1.0 / 100.0;
  EXPECT_NEAR(full_form_hamiltonian(sigma, ps), direct, 1e-12);
}

TEST(Mattis, RetrievalAndReversal) {
  const auto ps = PatternSet::generate(64, 1, 1, 2);
  const auto sigma = SpinConfiguration::aligned_with(ps.boolean_row(0));
  EXPECT_DOUBLE_EQ(mattis_magnetization(sigma, ps.boolean_row(0)), 1.0);
  EXPECT_DOUBLE_EQ(mattis_magnetization(sigma.flipped(), ps.boolean_row(0)), -1.0);
  const std::vector<double> short_row(10, 1.0);
  EXPECT_THROW(mattis_magnetization(sigma, short_row), ShapeError);
}

TEST(Mattis, RandomStateIsSmall) {
  int fails = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed + 1000);
    const auto ps = PatternSet::generate(10000, 1, 0, seed);
    if (std::abs(mattis_magnetization(SpinConfiguration::random(10000, rng), ps.boolean_row(0))) >= 0.04) ++fails;
  }
  EXPECT_LE(fails, 2);  // at most 1% of draws
}

TEST(Overlap, Examples) {
  const SpinConfiguration a({1, 1, -1, -1});
  const SpinConfiguration b({1, -1, -1, 1});
  EXPECT_DOUBLE_EQ(replica_overlap(a, a), 1.0);
  EXPECT_DOUBLE_EQ(replica_overlap(a, a.flipped()), -1.0);
  EXPECT_DOUBLE_EQ(replica_overlap(a, b), 0.0);
  EXPECT_DOUBLE_EQ(replica_overlap(a, b), replica_overlap(b, a));
  EXPECT_THROW(replica_overlap(a, SpinConfiguration::all_up(3)), ShapeError);
}

TEST(HiddenOverlap, Examples) {
  const std::vector<double> ones(5, 1.0), minus(5, -1.0);
  EXPECT_DOUBLE_EQ(hidden_overlap(ones, ones), 1.0);
  EXPECT_DOUBLE_EQ(hidden_overlap(ones, minus), -1.0);
  EXPECT_DOUBLE_EQ(hidden_overlap(std::vector<double>{1, 2}, std::vector<double>{3, -1}), 0.5);
  EXPECT_THROW(hidden_overlap(std::vector<double>{}, std::vector<double>{}), ShapeError);
  EXPECT_THROW(hidden_overlap(std::vector<double>{1}, std::vector<double>{1, 2}), ShapeError);
}

TEST(Measure, BooleanThenGaussian) {
  const auto ps = PatternSet::generate(40, 2, 3, 6);
  const auto sigma = SpinConfiguration::aligned_with(ps.boolean_row(1));
  const auto obs = measure(sigma, ps);
  ASSERT_EQ(obs.mattis.size(), 5u);
  EXPECT_DOUBLE_EQ(obs.mattis[1], 1.0);
  EXPECT_LE(std::abs(obs.mattis[0]), 1.0);
  EXPECT_NEAR(obs.energy, mixed_hamiltonian(sigma, ps), 1e-12);
}
