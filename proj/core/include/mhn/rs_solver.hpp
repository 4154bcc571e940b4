#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mhn {

/// Replica-symmetric order parameters under the pure-state ansatz
/// m_nu = m delta_{nu,1}.
struct RSOrderParams {
  double m = 0.0;      // condensed Mattis magnetization
  double q = 0.0;      // visible replica overlap q-bar
  double p_bar = 0.0;  // hidden replica overlap p-bar

  friend bool operator==(const RSOrderParams&, const RSOrderParams&) = default;
};

enum class QuadratureScheme {
  // Gauss-Legendre panels graded around the kink of tanh(beta m + s eta).
  // Stays accurate when s is large (low temperature), where a single
  // Gauss-Hermite rule cannot resolve the kink.
  kKinkPanels,
  // Plain Gauss-Hermite with `quadrature_nodes` nodes.
  kGaussHermite,
};

struct SolverSettings {
  // Gauss-Hermite node count, or 4x the Legendre points per panel for
  // kKinkPanels (so doubling it doubles the resolution in either scheme).
  int quadrature_nodes = 64;
  double damping = 0.5;
  double tol = 1e-12;
  int max_iter = 200000;
  // Lower bound on 1 - beta(1 - q) for alpha > 0.
  double singularity_epsilon = 1e-9;
  double m_threshold = 1e-4;
  double q_threshold = 1e-6;
  QuadratureScheme scheme = QuadratureScheme::kKinkPanels;
  // Safeguarded Newton steps on the residual once the damped iteration is
  // close; only accepted when they halve the residual.
  bool newton = true;
  // Keep m at its initial value (the m = 0 restricted problem).
  bool freeze_m = false;

  void validate() const;
};

enum class Branch { kSpinGlass, kRetrieval, kParamagnet };

std::string_view to_string(Branch b);

struct RSSolution {
  RSOrderParams params;
  double free_energy = 0.0;
  bool converged = false;
  int iterations = 0;
  Branch branch = Branch::kParamagnet;
  // max(|m' - m|, |q' - q|) at the returned point.
  double residual = 0.0;
  std::string diagnostic;
};

// beta q / (1 - beta(1 - q))^2
double p_bar_from_q(double q, double beta);

// One application of the self-consistency map. p-bar' is computed first from
// the input q, and m', q' are the eta-averages of tanh and tanh^2 evaluated
// with that p-bar'. Throws ConvergenceError when alpha > 0 and
// 1 - beta(1 - q) <= singularity_epsilon.
RSOrderParams self_consistency_rhs(const RSOrderParams& x, double alpha, double beta,
                                   const SolverSettings& settings = {});

// The replica-symmetric pressure A(m, q, p; alpha, beta) (larger is preferred).
double rs_free_energy(const RSOrderParams& x, double alpha, double beta, const SolverSettings& settings = {});

RSSolution solve_fixed_point(double alpha, double beta, const RSOrderParams& init,
                             const SolverSettings& settings = {});

struct BranchSet {
  // Distinct converged solutions, sorted by decreasing free energy.
  std::vector<RSSolution> branches;
  // Starts that did not converge, with diagnostics.
  std::vector<RSSolution> failures;

  const RSSolution* find(Branch b) const;
};

// Solves from the paramagnetic (0, 0), spin-glass (0, 0.9) and retrieval
// (1, 1) starts and merges solutions closer than 1e-6 in every component.
// The spin-glass start is raised to q = 1 - 0.5/beta when 0.9 would sit
// inside the singular region.
BranchSet enumerate_branches(double alpha, double beta, const SolverSettings& settings = {});

std::vector<RSOrderParams> canonical_starts(double alpha, double beta);

/// General-k mode: order parameters with one magnetization per Boolean
/// pattern. The Boolean average runs over all 2^k sign assignments (k <= 12).
struct MixtureParams {
  std::vector<double> m;
  double q = 0.0;
  double p_bar = 0.0;
};

struct MixtureSolution {
  MixtureParams params;
  double free_energy = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

MixtureParams mixture_rhs(const MixtureParams& x, double alpha, double beta, const SolverSettings& settings = {});
double mixture_free_energy(const MixtureParams& x, double alpha, double beta, const SolverSettings& settings = {});
// Plain damped iteration (no Newton steps).
MixtureSolution solve_mixture(double alpha, double beta, const MixtureParams& init,
                              const SolverSettings& settings = {});

}  // namespace mhn
