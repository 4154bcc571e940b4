#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mhn {

using Spin = std::int8_t;

/// Quenched disorder of the mixed network: k Boolean (+-1) patterns and
/// p standard-normal patterns over n neurons.
///
/// Both matrices are stored row-major, one pattern per row. A set built by
/// generate() is a pure function of (n, k, p, seed), which is what the JSON
/// snapshot relies on.
class PatternSet {
 public:
  static PatternSet generate(std::size_t n, std::size_t k, std::size_t p, std::uint64_t seed);

  // Explicit matrices, used by tests and small hand-built instances.
  // Throws ShapeError on wrong sizes or non +-1 Boolean entries.
  static PatternSet from_matrices(std::size_t n, std::size_t k, std::vector<Spin> boolean_patterns,
                                  std::size_t p, std::vector<double> gaussian_patterns,
                                  std::uint64_t seed = 0);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t p() const { return p_; }
  std::uint64_t seed() const { return seed_; }

  std::span<const Spin> boolean_row(std::size_t nu) const;
  std::span<const double> gaussian_row(std::size_t mu) const;

  std::span<const Spin> boolean_data() const { return boolean_; }
  std::span<const double> gaussian_data() const { return gaussian_; }

  // (1/(2N)) sum_i sum_mu (xi_i^mu)^2 + k/2: the gap between the pair-sum
  // Hamiltonian and the full double-sum form.
  double self_interaction_shift() const;

  friend bool operator==(const PatternSet&, const PatternSet&) = default;

 private:
  PatternSet(std::size_t n, std::size_t k, std::size_t p, std::uint64_t seed)
      : n_(n), k_(k), p_(p), seed_(seed) {}

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::size_t p_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Spin> boolean_;
  std::vector<double> gaussian_;
};

/// One replica's neuron state, entries restricted to +-1.
class SpinConfiguration {
 public:
  explicit SpinConfiguration(std::vector<Spin> spins);

  static SpinConfiguration all_up(std::size_t n);
  static SpinConfiguration random(std::size_t n, std::mt19937_64& rng);
  static SpinConfiguration aligned_with(std::span<const Spin> pattern_row);
  // Bit i of `index` set means spin i is +1.
  static SpinConfiguration from_index(std::size_t n, std::uint64_t index);

  std::size_t size() const { return spins_.size(); }
  Spin operator[](std::size_t i) const { return spins_[i]; }
  std::span<const Spin> spins() const { return spins_; }

  void flip(std::size_t i) { spins_[i] = static_cast<Spin>(-spins_[i]); }
  SpinConfiguration flipped() const;
  std::uint64_t to_index() const;

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  std::vector<Spin> spins_;
};

/// Dense symmetric Hebbian couplings with zero diagonal.
class CouplingMatrix {
 public:
  explicit CouplingMatrix(std::size_t n) : n_(n), j_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return j_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {j_.data() + i * n_, n_}; }

  // Writes both (i, j) and (j, i). Diagonal writes are ignored.
  void set(std::size_t i, std::size_t j, double value);

 private:
  std::size_t n_;
  std::vector<double> j_;
};

// J_ij = (1/N)(sum_nu xt_i xt_j + sum_mu xi_i xi_j) for i != j, J_ii = 0.
CouplingMatrix hebbian_couplings(const PatternSet& patterns);

}  // namespace mhn
