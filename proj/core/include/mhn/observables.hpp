#pragma once

#include <span>
#include <vector>

#include "mhn/patterns.hpp"

namespace mhn {

// Pair-sum Hamiltonian of the mixed network (self-interactions excluded):
//   H = -(1/N) sum_{i<j} (sum_nu xt_i xt_j + sum_mu xi_i xi_j) s_i s_j
// Evaluated directly over pairs, O(N^2 (k+p)).
double mixed_hamiltonian(const SpinConfiguration& sigma, const PatternSet& patterns);

// Full double-sum form, -(N/2) (sum_nu m_nu^2 + sum_mu m_mu^2), evaluated
// through the Mattis overlaps. Differs from mixed_hamiltonian by the constant
// PatternSet::self_interaction_shift().
double full_form_hamiltonian(const SpinConfiguration& sigma, const PatternSet& patterns);

// (1/N) sum_i xi_i s_i. Throws ShapeError on length mismatch.
double mattis_magnetization(const SpinConfiguration& sigma, std::span<const double> pattern_row);
double mattis_magnetization(const SpinConfiguration& sigma, std::span<const Spin> pattern_row);

// q_ab = (1/N) sum_i s_i^a s_i^b.
double replica_overlap(const SpinConfiguration& a, const SpinConfiguration& b);

// p_ab = (1/p) sum_mu z_mu^a z_mu^b. Throws ShapeError when p = 0.
double hidden_overlap(std::span<const double> z_a, std::span<const double> z_b);

struct Observables {
  // Boolean overlaps first (k entries), then Gaussian overlaps (p entries).
  std::vector<double> mattis;
  // Pair-sum energy.
  double energy = 0.0;
};

Observables measure(const SpinConfiguration& sigma, const PatternSet& patterns);

}  // namespace mhn
