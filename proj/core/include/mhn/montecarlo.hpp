#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mhn/patterns.hpp"

namespace mhn {

enum class InitKind { kPatternAligned, kRandom, kAllUp };

struct InitialState {
  InitKind kind = InitKind::kPatternAligned;
  // 1-based Boolean pattern index, used by kPatternAligned.
  std::size_t pattern = 1;
};

enum class UpdateRule { kGlauber, kMetropolis };

struct McConfig {
  std::size_t n = 0;
  double alpha = 0.0;  // p = round(alpha * n)
  std::size_t k = 1;
  double beta = 1.0;
  std::size_t sweeps = 1000;
  double thermalization_fraction = 0.5;
  InitialState init;
  std::uint64_t seed = 0;
  int n_replicas = 1;
  UpdateRule rule = UpdateRule::kGlauber;
  // Record the energy every `energy_trace_stride` measured sweeps; 0 disables.
  std::size_t energy_trace_stride = 0;
  std::size_t blocks = 20;

  std::size_t gaussian_count() const;
  std::size_t measured_sweeps() const;
  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double error = 0.0;
};

struct McResult {
  // Time-averaged |m_nu| per Boolean pattern, with blocking error bars.
  std::vector<Estimate> mattis;
  // Time-averaged signed m_nu, replica 1.
  std::vector<Estimate> mattis_signed;
  std::optional<Estimate> q12;
  Estimate energy;  // pair-sum energy per configuration, replica 1
  std::vector<double> energy_trace;
  // Accepted flips / attempted flips over all sweeps and replicas.
  double acceptance_rate = 0.0;
  std::size_t samples = 0;
};

// h_i = sum_{j != i} J_ij s_j, O(N). Throws ShapeError on a bad index.
double local_field(const SpinConfiguration& sigma, const CouplingMatrix& couplings, std::size_t i);

/// Local fields from running pattern overlaps. A flip costs O(k+p):
///   h_i = (1/N)[sum_nu xt_i M_nu + sum_mu xi_i G_mu] - s_i (k + sum_mu xi_i^2)/N
/// with M_nu = sum_i xt_i s_i and G_mu = sum_i xi_i s_i.
class FieldCache {
 public:
  FieldCache(const PatternSet& patterns, SpinConfiguration sigma);

  double field(std::size_t i) const;
  void flip(std::size_t i);

  const SpinConfiguration& state() const { return sigma_; }
  // (1/N) M_nu
  double boolean_mattis(std::size_t nu) const;
  // Pair-sum energy.
  double energy() const;

 private:
  std::size_t n_, k_, p_;
  double inv_n_;
  double shift_;
  std::vector<double> boolean_cols_;   // n x k
  std::vector<double> gaussian_cols_;  // n x p
  std::vector<double> self_term_;      // (k + sum_mu xi_i^2) / N
  std::vector<double> m_bool_;
  std::vector<double> m_gauss_;
  SpinConfiguration sigma_;
};

// Single-spin heat-bath (or Metropolis) sweeps in a fresh random site order
// each sweep. Deterministic given (cfg, patterns).
McResult run_dynamics(const McConfig& cfg, const PatternSet& patterns);

// Empirical frequency of every configuration (indexed by
// SpinConfiguration::to_index) over the measured sweeps of replica 1.
// Requires n <= 20.
std::vector<double> empirical_state_frequencies(const McConfig& cfg, const PatternSet& patterns);

// Pattern-aligned start on Boolean pattern 1; returns the time average of
// |m_1| over the last 25% of sweeps. Disorder is drawn from `seed`.
double retrieval_trial(std::size_t n, double alpha, std::size_t k, double beta, std::size_t sweeps,
                       std::uint64_t seed);

enum class RetrievalVerdict { kRetrieved, kNotRetrieved, kAmbiguous };

std::string_view to_string(RetrievalVerdict v);

// |m| >= high counts as retrieval, |m| <= low as none; in between is ambiguous.
// The 0.2 / 0.8 split is a convention of this library.
RetrievalVerdict classify_retrieval(double abs_m, double low = 0.2, double high = 0.8);

}  // namespace mhn
