#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mhn/patterns.hpp"

namespace mhn {

struct ExactResult {
  double log_z = 0.0;
  std::size_t n = 0;
  double beta = 0.0;
};

struct EnumerationOptions {
  // 2^max_n configurations is the ceiling for every exhaustive routine.
  std::size_t max_n = 24;
  // Hidden-unit cap for the quadrature route; the cost is 2^N * p * nodes.
  std::size_t max_p_quadrature = 6;
  int min_nodes = 16;
  // Worker threads for the configuration sum; 0 means hardware concurrency.
  unsigned jobs = 0;
};

// log sum_s exp{(beta/2N) sum_{i,j} (sum_nu xt_i xt_j + sum_mu xi_i xi_j) s_i s_j},
// i.e. the full double sum with self-interactions. Throws SizeError if
// n > options.max_n.
ExactResult partition_ahn_exact(const PatternSet& patterns, double beta,
                                const EnumerationOptions& options = {});

// Same sum with the pair-sum Hamiltonian (no self-interactions), evaluated
// from the dense couplings rather than the overlaps.
ExactResult partition_pairwise_exact(const PatternSet& patterns, double beta,
                                     const EnumerationOptions& options = {});

// Dual route: the Gaussian part is written as p hidden Gaussian units and
// each z_mu is integrated by Gauss-Hermite for every visible configuration.
// The Boolean part enters as the same exponential factor as on the direct side.
ExactResult partition_rbm_quadrature(const PatternSet& patterns, double beta, int nodes,
                                     const EnumerationOptions& options = {});

struct QuenchedEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Sample mean and standard error of (1/N) log Z over independent disorders.
// Disorder s uses seed mix_seed(seed, s). Throws std::invalid_argument for
// fewer than two samples.
QuenchedEstimate quenched_free_energy_finite(std::size_t n, std::size_t k, std::size_t p, double beta,
                                             std::size_t n_disorder_samples, std::uint64_t seed,
                                             const EnumerationOptions& options = {});

// Gibbs probabilities exp(-beta H)/Z indexed by SpinConfiguration::to_index().
std::vector<double> boltzmann_probabilities(const PatternSet& patterns, double beta,
                                            const EnumerationOptions& options = {});

}  // namespace mhn
