#include "mhn/phase_diagram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mhn/error.hpp"

namespace mhn {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kParamagnet:
      return "paramagnet";
    case Phase::kSpinGlass:
      return "spin-glass";
    case Phase::kRetrievalMetastable:
      return "retrieval-metastable";
    case Phase::kRetrievalStable:
      return "retrieval-stable";
  }
  return "unknown";
}

std::string_view to_string(BoundaryCurve::Kind k) {
  switch (k) {
    case BoundaryCurve::Kind::kSecondOrder:
      return "second_order";
    case BoundaryCurve::Kind::kExistence:
      return "retrieval_existence";
    case BoundaryCurve::Kind::kFirstOrder:
      return "first_order";
  }
  return "unknown";
}

namespace {

std::string fmt_range(const char* what, double lo, double hi) {
  std::ostringstream os;
  os.precision(6);
  os << what << " in [" << lo << ", " << hi << "]";
  return os.str();
}

// Bisection on a predicate with pred(lo) == false and pred(hi) == true (or the
// reverse when `rising` is false). Returns the midpoint of the final bracket.
double bisect(const std::function<bool(double)>& pred, double lo, double hi, double width) {
  const bool at_lo = pred(lo);
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool has_retrieval(double alpha, double beta, const SolverSettings& settings) {
  return enumerate_branches(alpha, beta, settings).find(Branch::kRetrieval) != nullptr;
}

}  // namespace

double second_order_line_analytic(double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("second_order_line_analytic: alpha must be >= 0");
  return 1.0 / (1.0 + std::sqrt(alpha));
}

double second_order_line_numeric(double alpha, const SolverSettings& settings, const BisectionOptions& options) {
  if (!(alpha > 0.0)) throw std::invalid_argument("second_order_line_numeric: alpha must be > 0");
  SolverSettings frozen = settings;
  frozen.freeze_m = true;
  auto ordered = [&](double beta) {
    const auto starts = canonical_starts(alpha, beta);
    const RSSolution s = solve_fixed_point(alpha, beta, starts.at(1), frozen);
    if (!s.converged) {
      throw ConvergenceError("second_order_line_numeric: m = 0 solve failed at beta = " + std::to_string(beta) +
                             ": " + s.diagnostic);
    }
    return s.params.q > options.q_onset;
  };
  double lo = options.beta_lo, hi = options.beta_hi;
  if (ordered(lo) || !ordered(hi)) {
    lo = options.beta_lo_fallback;
    hi = options.beta_hi_fallback;
    if (ordered(lo) || !ordered(hi)) {
      throw ConvergenceError("second_order_line_numeric: no onset of q found for " +
                             fmt_range("beta", lo, hi) + " at alpha = " + std::to_string(alpha));
    }
  }
  return bisect(ordered, lo, hi, options.beta_width);
}

double retrieval_existence_boundary(double beta, const SolverSettings& settings, const BisectionOptions& options) {
  if (!(beta > 1.0)) {
    throw std::invalid_argument("retrieval_existence_boundary: no retrieval branch for beta <= 1");
  }
  auto exists = [&](double alpha) { return has_retrieval(alpha, beta, settings); };
  if (!exists(0.0)) {
    throw ConvergenceError("retrieval_existence_boundary: retrieval branch missing at alpha = 0");
  }
  double hi = options.alpha_hi;
  if (exists(hi)) {
    hi = options.alpha_hi_fallback;
    if (exists(hi)) {
      throw ConvergenceError("retrieval_existence_boundary: retrieval branch persists for " +
                             fmt_range("alpha", 0.0, hi));
    }
  }
  return bisect(exists, 0.0, hi, options.alpha_width);
}

double first_order_line(double beta, const SolverSettings& settings, const BisectionOptions& options) {
  const double alpha_max = retrieval_existence_boundary(beta, settings, options);
  // Sign of A_retrieval - A_spinglass; both branches must exist at the probe.
  auto spin_glass_wins = [&](double alpha) {
    const BranchSet set = enumerate_branches(alpha, beta, settings);
    const RSSolution* ret = set.find(Branch::kRetrieval);
    const RSSolution* sg = set.find(Branch::kSpinGlass);
    if (ret == nullptr || sg == nullptr) {
      throw ConvergenceError("first_order_line: retrieval and spin-glass branches do not coexist at alpha = " +
                             std::to_string(alpha) + ", beta = " + std::to_string(beta));
    }
    return sg->free_energy > ret->free_energy;
  };
  const double hi = alpha_max - options.alpha_width;
  double lo = 1e-2 * alpha_max;
  if (!(hi > lo) || !spin_glass_wins(hi)) {
    throw ConvergenceError("first_order_line: retrieval stays preferred up to its existence boundary " +
                           std::to_string(alpha_max) + " at beta = " + std::to_string(beta));
  }
  if (spin_glass_wins(lo)) {
    lo *= 1e-2;
    if (spin_glass_wins(lo)) {
      throw ConvergenceError("first_order_line: spin-glass preferred across " + fmt_range("alpha", lo, hi));
    }
  }
  return bisect(spin_glass_wins, lo, hi, options.alpha_width);
}

ConjectureResult conjecture_shift(double alpha, double gamma, double beta, const SolverSettings& settings) {
  if (!(alpha >= 0.0) || !(gamma >= 0.0)) {
    throw std::invalid_argument("conjecture_shift: alpha and gamma must be >= 0");
  }
  ConjectureResult r;
  r.alpha = alpha;
  r.gamma = gamma;
  r.beta = beta;
  r.branches = enumerate_branches(alpha + gamma, beta, settings);
  return r;
}

PhasePoint classify_point(double alpha, double beta, double gamma, const SolverSettings& settings) {
  PhasePoint pt;
  pt.alpha = alpha;
  pt.beta = beta;
  pt.gamma = gamma;
  try {
    pt.branches = conjecture_shift(alpha, gamma, beta, settings).branches;
  } catch (const std::exception& e) {
    pt.error = e.what();
    return pt;
  }
  const RSSolution* ret = pt.branches.find(Branch::kRetrieval);
  const RSSolution* sg = pt.branches.find(Branch::kSpinGlass);
  if (ret != nullptr) {
    pt.phase = (sg == nullptr || ret->free_energy >= sg->free_energy) ? Phase::kRetrievalStable
                                                                     : Phase::kRetrievalMetastable;
  } else if (sg != nullptr) {
    pt.phase = Phase::kSpinGlass;
  } else if (pt.branches.find(Branch::kParamagnet) != nullptr) {
    pt.phase = Phase::kParamagnet;
  } else {
    pt.error = "no converged branch";
  }
  return pt;
}

void GridSpec::validate() const {
  if (alpha_points < 1 || beta_points < 1) throw std::invalid_argument("GridSpec: need at least one point per axis");
  if (!(alpha_min >= 0.0) || !(alpha_max >= alpha_min)) throw std::invalid_argument("GridSpec: bad alpha range");
  if (!(beta_min > 0.0) || !(beta_max >= beta_min)) throw std::invalid_argument("GridSpec: bad beta range");
  if (!(gamma >= 0.0)) throw std::invalid_argument("GridSpec: gamma must be >= 0");
}

double GridSpec::alpha_at(int i) const {
  if (alpha_points == 1) return alpha_min;
  return alpha_min + (alpha_max - alpha_min) * static_cast<double>(i) / static_cast<double>(alpha_points - 1);
}

double GridSpec::beta_at(int j) const {
  if (beta_points == 1) return beta_min;
  return beta_min + (beta_max - beta_min) * static_cast<double>(j) / static_cast<double>(beta_points - 1);
}

std::vector<PhasePoint> scan_grid(const GridSpec& grid, const SolverSettings& settings, unsigned jobs) {
  grid.validate();
  settings.validate();
  const std::size_t total = static_cast<std::size_t>(grid.alpha_points) * static_cast<std::size_t>(grid.beta_points);
  std::vector<PhasePoint> out(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const int i = static_cast<int>(idx / static_cast<std::size_t>(grid.beta_points));
      const int j = static_cast<int>(idx % static_cast<std::size_t>(grid.beta_points));
      out[idx] = classify_point(grid.alpha_at(i), grid.beta_at(j), grid.gamma, settings);
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

namespace {

BoundaryCurve sorted_curve(BoundaryCurve c) {
  std::sort(c.points.begin(), c.points.end());
  return c;
}

}  // namespace

BoundaryCurve second_order_curve(const std::vector<double>& alphas, const SolverSettings& settings,
                                 const BisectionOptions& options) {
  BoundaryCurve c{BoundaryCurve::Kind::kSecondOrder, {}, options.beta_width};
  for (double a : alphas) c.points.emplace_back(a, second_order_line_numeric(a, settings, options));
  return sorted_curve(std::move(c));
}

BoundaryCurve existence_curve(const std::vector<double>& betas, const SolverSettings& settings,
                              const BisectionOptions& options) {
  BoundaryCurve c{BoundaryCurve::Kind::kExistence, {}, options.alpha_width};
  for (double b : betas) c.points.emplace_back(retrieval_existence_boundary(b, settings, options), b);
  return sorted_curve(std::move(c));
}

BoundaryCurve first_order_curve(const std::vector<double>& betas, const SolverSettings& settings,
                                const BisectionOptions& options) {
  BoundaryCurve c{BoundaryCurve::Kind::kFirstOrder, {}, options.alpha_width};
  for (double b : betas) c.points.emplace_back(first_order_line(b, settings, options), b);
  return sorted_curve(std::move(c));
}

}  // namespace mhn
