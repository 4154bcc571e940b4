#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mhn/rs_solver.hpp"

namespace mhn {

enum class Phase { kParamagnet, kSpinGlass, kRetrievalMetastable, kRetrievalStable };

std::string_view to_string(Phase p);

// Branches are compared by the pressure A = (1/N) E ln Z, so the preferred
// branch is the one with the larger A. Written into every output record.
inline constexpr std::string_view kOrderingConvention = "larger_A_preferred";

struct PhasePoint {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  BranchSet branches;
  Phase phase = Phase::kParamagnet;
  // Non-empty when the point could not be classified.
  std::string error;
};

struct BoundaryCurve {
  enum class Kind { kSecondOrder, kExistence, kFirstOrder };
  Kind kind = Kind::kSecondOrder;
  std::vector<std::pair<double, double>> points;  // (alpha, beta), sorted by alpha
  double tolerance = 0.0;
};

std::string_view to_string(BoundaryCurve::Kind k);

struct BisectionOptions {
  double beta_width = 1e-4;   // second-order line
  double alpha_width = 1e-4;  // existence and first-order lines
  double q_onset = 1e-6;
  // Initial brackets; each is widened once to the fallback before giving up.
  double beta_lo = 0.05, beta_hi = 1.0;
  double beta_lo_fallback = 0.01, beta_hi_fallback = 1.5;
  double alpha_hi = 0.2, alpha_hi_fallback = 1.0;
};

// 1 / (1 + sqrt(alpha))
double second_order_line_analytic(double alpha);

// Bisection in beta on "the m = 0 solution has q > q_onset".
// Throws ConvergenceError when the bracket cannot be established.
double second_order_line_numeric(double alpha, const SolverSettings& settings = {},
                                 const BisectionOptions& options = {});

// Largest alpha at which enumerate_branches still finds a retrieval branch.
// Requires beta > 1.
double retrieval_existence_boundary(double beta, const SolverSettings& settings = {},
                                    const BisectionOptions& options = {});

// Alpha where the retrieval and spin-glass pressures balance. Always below
// retrieval_existence_boundary(beta).
double first_order_line(double beta, const SolverSettings& settings = {}, const BisectionOptions& options = {});

// Branches at alpha + gamma; the input (alpha, gamma) is kept for the record.
struct ConjectureResult {
  double alpha = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  BranchSet branches;
};

ConjectureResult conjecture_shift(double alpha, double gamma, double beta, const SolverSettings& settings = {});

PhasePoint classify_point(double alpha, double beta, double gamma, const SolverSettings& settings = {});

struct GridSpec {
  double alpha_min = 0.0, alpha_max = 0.2;
  double beta_min = 0.5, beta_max = 5.0;
  int alpha_points = 20;
  int beta_points = 20;
  double gamma = 0.0;

  void validate() const;
  double alpha_at(int i) const;
  double beta_at(int j) const;
};

// Alpha-major order: index = i * beta_points + j. `jobs` = 0 uses hardware
// concurrency; the output does not depend on it.
std::vector<PhasePoint> scan_grid(const GridSpec& grid, const SolverSettings& settings = {}, unsigned jobs = 0);

BoundaryCurve second_order_curve(const std::vector<double>& alphas, const SolverSettings& settings = {},
                                 const BisectionOptions& options = {});
BoundaryCurve existence_curve(const std::vector<double>& betas, const SolverSettings& settings = {},
                              const BisectionOptions& options = {});
BoundaryCurve first_order_curve(const std::vector<double>& betas, const SolverSettings& settings = {},
                                const BisectionOptions& options = {});

}  // namespace mhn
