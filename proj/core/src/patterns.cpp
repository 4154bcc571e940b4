#include "mhn/patterns.hpp"

#include <string>

#include "mhn/error.hpp"

namespace mhn {

PatternSet PatternSet::generate(std::size_t n, std::size_t k, std::size_t p, std::uint64_t seed) {
  if (n == 0) throw ShapeError("PatternSet: n must be positive");
  PatternSet set(n, k, p, seed);
  std::mt19937_64 rng(seed);
  set.boolean_.resize(k * n);
  for (auto& x : set.boolean_) x = (rng() >> 63) ? Spin{1} : Spin{-1};
  std::normal_distribution<double> normal(0.0, 1.0);
  set.gaussian_.resize(p * n);
  for (auto& x : set.gaussian_) x = normal(rng);
  return set;
}

PatternSet PatternSet::from_matrices(std::size_t n, std::size_t k, std::vector<Spin> boolean_patterns,
                                     std::size_t p, std::vector<double> gaussian_patterns,
                                     std::uint64_t seed) {
  if (n == 0) throw ShapeError("PatternSet: n must be positive");
  if (boolean_patterns.size() != k * n) {
    throw ShapeError("PatternSet: boolean matrix has " + std::to_string(boolean_patterns.size()) +
                     " entries, expected " + std::to_string(k * n));
  }
  if (gaussian_patterns.size() != p * n) {
    throw ShapeError("PatternSet: gaussian matrix has " + std::to_string(gaussian_patterns.size()) +
                     " entries, expected " + std::to_string(p * n));
  }
  for (Spin s : boolean_patterns) {
    if (s != 1 && s != -1) throw ShapeError("PatternSet: boolean entries must be +1 or -1");
  }
  PatternSet set(n, k, p, seed);
  set.boolean_ = std::move(boolean_patterns);
  set.gaussian_ = std::move(gaussian_patterns);
  return set;
}

std::span<const Spin> PatternSet::boolean_row(std::size_t nu) const {
  if (nu >= k_) throw ShapeError("PatternSet: boolean pattern index out of range");
  return {boolean_.data() + nu * n_, n_};
}

std::span<const double> PatternSet::gaussian_row(std::size_t mu) const {
  if (mu >= p_) throw ShapeError("PatternSet: gaussian pattern index out of range");
  return {gaussian_.data() + mu * n_, n_};
}

double PatternSet::self_interaction_shift() const {
  double sq = 0.0;
  for (double x : gaussian_) sq += x * x;
  return sq / (2.0 * static_cast<double>(n_)) + static_cast<double>(k_) / 2.0;
}

SpinConfiguration::SpinConfiguration(std::vector<Spin> spins) : spins_(std::move(spins)) {
  for (Spin s : spins_) {
    if (s != 1 && s != -1) throw ShapeError("SpinConfiguration: entries must be +1 or -1");
  }
}

SpinConfiguration SpinConfiguration::all_up(std::size_t n) {
  return SpinConfiguration(std::vector<Spin>(n, Spin{1}));
}

SpinConfiguration SpinConfiguration::random(std::size_t n, std::mt19937_64& rng) {
  std::vector<Spin> s(n);
  for (auto& x : s) x = (rng() >> 63) ? Spin{1} : Spin{-1};
  return SpinConfiguration(std::move(s));
}

SpinConfiguration SpinConfiguration::aligned_with(std::span<const Spin> pattern_row) {
  return SpinConfiguration(std::vector<Spin>(pattern_row.begin(), pattern_row.end()));
}

SpinConfiguration SpinConfiguration::from_index(std::size_t n, std::uint64_t index) {
  if (n > 64) throw ShapeError("SpinConfiguration::from_index: n > 64");
  std::vector<Spin> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = ((index >> i) & 1U) ? Spin{1} : Spin{-1};
  return SpinConfiguration(std::move(s));
}

SpinConfiguration SpinConfiguration::flipped() const {
  SpinConfiguration out = *this;
  for (auto& s : out.spins_) s = static_cast<Spin>(-s);
  return out;
}

std::uint64_t SpinConfiguration::to_index() const {
  if (spins_.size() > 64) throw ShapeError("SpinConfiguration::to_index: n > 64");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] > 0) index |= (std::uint64_t{1} << i);
  }
  return index;
}

void CouplingMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= n_ || j >= n_) throw ShapeError("CouplingMatrix: index out of range");
  if (i == j) return;
  j_[i * n_ + j] = value;
  j_[j * n_ + i] = value;
}

CouplingMatrix hebbian_couplings(const PatternSet& patterns) {
  const std::size_t n = patterns.n();
  const double inv_n = 1.0 / static_cast<double>(n);
  CouplingMatrix j(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double sum = 0.0;
      for (std::size_t nu = 0; nu < patterns.k(); ++nu) {
        const auto row = patterns.boolean_row(nu);
        sum += static_cast<double>(row[a] * row[b]);
      }
      for (std::size_t mu = 0; mu < patterns.p(); ++mu) {
        const auto row = patterns.gaussian_row(mu);
        sum += row[a] * row[b];
      }
      j.set(a, b, sum * inv_n);
    }
  }
  return j;
}

}  // namespace mhn
