#include "mhn/rs_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "mhn/error.hpp"
#include "mhn/quadrature.hpp"

namespace mhn {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

int panel_points(const SolverSettings& s) { return std::max(8, s.quadrature_nodes / 4); }

// E_eta f(a + s eta) for the scheme in `settings`.
template <typename F>
double field_average(F f, double a, double s, const SolverSettings& settings) {
  if (s == 0.0) return f(a);
  if (settings.scheme == QuadratureScheme::kGaussHermite) {
    return gaussian_expectation([&](double eta) { return f(a + s * eta); }, settings.quadrature_nodes);
  }
  return gaussian_expectation_split([&](double eta) { return f(a + s * eta); }, -a / s, s, panel_points(settings));
}

struct TanhMoments {
  double t = 0.0;
  double t2 = 0.0;
};

TanhMoments tanh_moments(double a, double s, const SolverSettings& settings) {
  if (s == 0.0) {
    const double t = std::tanh(a);
    return {t, t * t};
  }
  TanhMoments out;
  auto accumulate = [&](double eta, double w) {
    const double t = std::tanh(a + s * eta);
    out.t += w * t;
    out.t2 += w * t * t;
  };
  if (settings.scheme == QuadratureScheme::kGaussHermite) {
    const auto rule = GaussHermiteRule::get(settings.quadrature_nodes);
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) accumulate(rule->nodes[i], rule->weights[i]);
  } else {
    KinkPanels(-a / s, s, panel_points(settings)).for_each(accumulate);
  }
  return out;
}

double guard_margin(double q, double beta) { return 1.0 - beta * (1.0 - q); }

std::string describe(double alpha, double beta, double q) {
  std::ostringstream os;
  os.precision(17);
  os << "singular point 1 - beta(1 - q) <= epsilon at (alpha=" << alpha << ", beta=" << beta << ", q=" << q << ")";
  return os.str();
}

// Field width sqrt(alpha beta p-bar); zero whenever alpha is zero.
double field_scale(double alpha, double beta, double p_bar) {
  if (alpha == 0.0 || p_bar == 0.0) return 0.0;
  return std::sqrt(alpha * beta * p_bar);
}

Branch classify(const RSOrderParams& x, const SolverSettings& s) {
  if (std::abs(x.m) > s.m_threshold) return Branch::kRetrieval;
  if (x.q > s.q_threshold) return Branch::kSpinGlass;
  return Branch::kParamagnet;
}

// The solver's view of the map: state (m, q), p-bar slaved to q.
class FixedPointMap {
 public:
  FixedPointMap(double alpha, double beta, const SolverSettings& settings)
      : alpha_(alpha), beta_(beta), settings_(settings) {}

  bool admissible(double m, double q) const {
    if (!(q >= 0.0 && q <= 1.0) || !(std::abs(m) <= 1.0)) return false;
    return alpha_ == 0.0 || guard_margin(q, beta_) > settings_.singularity_epsilon;
  }

  // G(m, q) - (m, q); nullopt outside the admissible set.
  std::optional<std::pair<double, double>> residual(double m, double q) const {
    if (!admissible(m, q)) return std::nullopt;
    const RSOrderParams y = self_consistency_rhs({m, q, 0.0}, alpha_, beta_, settings_);
    const double dm = settings_.freeze_m ? 0.0 : y.m - m;
    return std::make_pair(dm, y.q - q);
  }

 private:
  double alpha_, beta_;
  const SolverSettings& settings_;
};

double norm_inf(const std::pair<double, double>& r) { return std::max(std::abs(r.first), std::abs(r.second)); }

// One safeguarded Newton step on F(x) = G(x) - x using a forward-difference
// Jacobian. Returns the new point if its residual is below `target`.
std::optional<std::pair<double, double>> newton_step(const FixedPointMap& map, double m, double q,
                                                     const std::pair<double, double>& f, bool freeze_m,
                                                     double target) {
  const double h = 1e-7;
  const double hq = (q + h <= 1.0) ? h : -h;
  const auto fq = map.residual(m, q + hq);
  if (!fq) return std::nullopt;
  const double j12 = (fq->first - f.first) / hq;
  const double j22 = (fq->second - f.second) / hq;
  double dm = 0.0, dq = 0.0;
  if (freeze_m) {
    if (j22 == 0.0) return std::nullopt;
    dq = -f.second / j22;
  } else {
    const double hm = (m + h <= 1.0) ? h : -h;
    const auto fm = map.residual(m + hm, q);
    if (!fm) return std::nullopt;
    const double j11 = (fm->first - f.first) / hm;
    const double j21 = (fm->second - f.second) / hm;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    dm = -(j22 * f.first - j12 * f.second) / det;
    dq = -(-j21 * f.first + j11 * f.second) / det;
  }
  constexpr double kMaxStep = 0.05;
  const double step = std::max(std::abs(dm), std::abs(dq));
  if (!std::isfinite(step)) return std::nullopt;
  if (step > kMaxStep) {
    dm *= kMaxStep / step;
    dq *= kMaxStep / step;
  }
  const auto fn = map.residual(m + dm, q + dq);
  if (!fn || !(norm_inf(*fn) < target)) return std::nullopt;
  return std::make_pair(m + dm, q + dq);
}

}  // namespace

void SolverSettings::validate() const {
  if (quadrature_nodes < 8) throw std::invalid_argument("SolverSettings: quadrature_nodes must be >= 8");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("SolverSettings: damping must lie in (0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("SolverSettings: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("SolverSettings: max_iter must be >= 1");
  if (!(singularity_epsilon > 0.0)) throw std::invalid_argument("SolverSettings: singularity_epsilon must be positive");
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::kSpinGlass:
      return "spin-glass";
    case Branch::kRetrieval:
      return "retrieval";
    case Branch::kParamagnet:
      return "paramagnet";
  }
  return "unknown";
}

double p_bar_from_q(double q, double beta) {
  const double d = guard_margin(q, beta);
  if (q == 0.0) return 0.0;
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return beta * q / (d * d);
}

RSOrderParams self_consistency_rhs(const RSOrderParams& x, double alpha, double beta, const SolverSettings& settings) {
  if (alpha > 0.0 && !(guard_margin(x.q, beta) > settings.singularity_epsilon)) {
    throw ConvergenceError(describe(alpha, beta, x.q));
  }
  RSOrderParams y;
  y.p_bar = p_bar_from_q(x.q, beta);
  const double s = field_scale(alpha, beta, y.p_bar);
  const TanhMoments mom = tanh_moments(beta * x.m, s, settings);
  y.m = settings.freeze_m ? x.m : mom.t;
  y.q = mom.t2;
  return y;
}

double rs_free_energy(const RSOrderParams& x, double alpha, double beta, const SolverSettings& settings) {
  double a = std::numbers::ln2 - 0.5 * beta * x.m * x.m;
  if (alpha > 0.0) {
    const double d = guard_margin(x.q, beta);
    if (!(d > 0.0)) throw ConvergenceError(describe(alpha, beta, x.q));
    a += -0.5 * alpha * beta - 0.5 * alpha * std::log(d) + alpha * beta * x.q / (2.0 * d) -
         0.5 * alpha * beta * x.p_bar * (1.0 - x.q);
  }
  const double s = field_scale(alpha, beta, x.p_bar);
  a += field_average(log_cosh, beta * x.m, s, settings);
  return a;
}

RSSolution solve_fixed_point(double alpha, double beta, const RSOrderParams& init, const SolverSettings& settings) {
  settings.validate();
  RSSolution sol;
  const FixedPointMap map(alpha, beta, settings);
  double m = init.m;
  double q = init.q;
  auto finish = [&](bool converged, double residual, std::string diagnostic) {
    sol.params = {m, q, p_bar_from_q(q, beta)};
    sol.converged = converged;
    sol.residual = residual;
    sol.diagnostic = std::move(diagnostic);
    sol.branch = classify(sol.params, settings);
    sol.free_energy = converged ? rs_free_energy(sol.params, alpha, beta, settings) : kNaN;
    return sol;
  };

  if (!map.admissible(m, q)) {
    if (!(q >= 0.0 && q <= 1.0) || !(std::abs(m) <= 1.0)) return finish(false, kNaN, "initial point outside |m| <= 1, 0 <= q <= 1");
    return finish(false, kNaN, describe(alpha, beta, q));
  }

  double lambda = settings.damping;
  double best_res = std::numeric_limits<double>::infinity();
  int stalled = 0;
  int reversals = 0;
  double best_ever = std::numeric_limits<double>::infinity();
  std::pair<double, double> prev_f{0.0, 0.0};
  constexpr double kNewtonWindow = 1e-1;

  for (int it = 1; it <= settings.max_iter; ++it) {
    sol.iterations = it;
    const auto f = map.residual(m, q);
    if (!f) return finish(false, kNaN, describe(alpha, beta, q));
    const double res = norm_inf(*f);
    if (!std::isfinite(res)) return finish(false, res, "non-finite residual");
    if (res < settings.tol) {
      // Polish: one Newton step if it still improves the residual.
      if (settings.newton) {
        if (const auto x = newton_step(map, m, q, *f, settings.freeze_m, res)) {
          const double r2 = norm_inf(*map.residual(x->first, x->second));
          if (r2 < res) {
            m = x->first;
            q = x->second;
            return finish(true, r2, "");
          }
        }
      }
      return finish(true, res, "");
    }

    // Oscillation: ten iterations without beating the best residual, most of
    // them reversing direction. A monotone drift (slow passage near a
    // vanishing branch) keeps its damping.
    const bool reversed = f->first * prev_f.first + f->second * prev_f.second < 0.0;
    prev_f = *f;
    if (res < best_res) {
      best_res = res;
      stalled = 0;
      reversals = 0;
    } else {
      ++stalled;
      if (reversed) ++reversals;
      if (stalled >= 10) {
        if (reversals >= 5) lambda = std::max(lambda * 0.5, 1e-6);
        stalled = 0;
        reversals = 0;
        best_res = res;
      }
    }

    // Newton steps must halve the best residual seen so far; near a vanished
    // branch the residual has a positive local minimum that would otherwise
    // trap the iterate.
    best_ever = std::min(best_ever, res);
    if (settings.newton && res < kNewtonWindow && it % 5 == 0) {
      if (const auto x = newton_step(map, m, q, *f, settings.freeze_m, 0.5 * best_ever)) {
        m = x->first;
        q = x->second;
        prev_f = {0.0, 0.0};
        continue;
      }
    }

    double step = lambda;
    int tries = 0;
    for (; tries < 60; ++tries) {
      if (map.admissible(m + step * f->first, q + step * f->second)) break;
      step *= 0.5;
    }
    if (tries == 60) return finish(false, res, "damped step cannot stay outside the singular region; " + describe(alpha, beta, q));
    m += step * f->first;
    q += step * f->second;
  }
  const auto f = map.residual(m, q);
  std::ostringstream os;
  os << "max_iter=" << settings.max_iter << " exhausted";
  return finish(false, f ? norm_inf(*f) : kNaN, os.str());
}

const RSSolution* BranchSet::find(Branch b) const {
  for (const auto& s : branches) {
    if (s.branch == b) return &s;
  }
  return nullptr;
}

std::vector<RSOrderParams> canonical_starts(double alpha, double beta) {
  double q_sg = 0.9;
  if (alpha > 0.0 && guard_margin(q_sg, beta) < 0.5) q_sg = 1.0 - 0.5 / beta;
  return {
      {0.0, 0.0, 0.0},
      {0.0, q_sg, p_bar_from_q(q_sg, beta)},
      {1.0, 1.0, p_bar_from_q(1.0, beta)},
  };
}

BranchSet enumerate_branches(double alpha, double beta, const SolverSettings& settings) {
  BranchSet out;
  for (const auto& start : canonical_starts(alpha, beta)) {
    RSSolution sol = solve_fixed_point(alpha, beta, start, settings);
    if (!sol.converged) {
      out.failures.push_back(std::move(sol));
      continue;
    }
    const bool duplicate = std::any_of(out.branches.begin(), out.branches.end(), [&](const RSSolution& b) {
      return std::abs(b.params.m - sol.params.m) < 1e-6 && std::abs(b.params.q - sol.params.q) < 1e-6 &&
             std::abs(b.params.p_bar - sol.params.p_bar) < 1e-6;
    });
    if (!duplicate) out.branches.push_back(std::move(sol));
  }
  std::stable_sort(out.branches.begin(), out.branches.end(),
                   [](const RSSolution& a, const RSSolution& b) { return a.free_energy > b.free_energy; });
  return out;
}

namespace {

void check_mixture_size(std::size_t k) {
  if (k == 0 || k > 12) throw std::invalid_argument("mixture mode needs 1 <= k <= 12");
}

// Calls visit(sign vector as bitmask, field) for every Boolean assignment.
template <typename Visit>
void for_each_assignment(const std::vector<double>& m, double beta, Visit visit) {
  const std::size_t k = m.size();
  for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
    double field = 0.0;
    for (std::size_t nu = 0; nu < k; ++nu) field += ((mask >> nu) & 1U ? 1.0 : -1.0) * m[nu];
    visit(mask, beta * field);
  }
}

}  // namespace

MixtureParams mixture_rhs(const MixtureParams& x, double alpha, double beta, const SolverSettings& settings) {
  check_mixture_size(x.m.size());
  if (alpha > 0.0 && !(guard_margin(x.q, beta) > settings.singularity_epsilon)) {
    throw ConvergenceError(describe(alpha, beta, x.q));
  }
  MixtureParams y;
  y.m.assign(x.m.size(), 0.0);
  y.p_bar = p_bar_from_q(x.q, beta);
  const double s = field_scale(alpha, beta, y.p_bar);
  const double weight = 1.0 / static_cast<double>(1U << x.m.size());
  for_each_assignment(x.m, beta, [&](std::uint32_t mask, double a) {
    const TanhMoments mom = tanh_moments(a, s, settings);
    for (std::size_t nu = 0; nu < x.m.size(); ++nu) y.m[nu] += weight * ((mask >> nu) & 1U ? 1.0 : -1.0) * mom.t;
    y.q += weight * mom.t2;
  });
  return y;
}

double mixture_free_energy(const MixtureParams& x, double alpha, double beta, const SolverSettings& settings) {
  check_mixture_size(x.m.size());
  double a = std::numbers::ln2;
  for (double m : x.m) a -= 0.5 * beta * m * m;
  if (alpha > 0.0) {
    const double d = guard_margin(x.q, beta);
    if (!(d > 0.0)) throw ConvergenceError(describe(alpha, beta, x.q));
    a += -0.5 * alpha * beta - 0.5 * alpha * std::log(d) + alpha * beta * x.q / (2.0 * d) -
         0.5 * alpha * beta * x.p_bar * (1.0 - x.q);
  }
  const double s = field_scale(alpha, beta, x.p_bar);
  const double weight = 1.0 / static_cast<double>(1U << x.m.size());
  for_each_assignment(x.m, beta, [&](std::uint32_t, double field) { a += weight * field_average(log_cosh, field, s, settings); });
  return a;
}

MixtureSolution solve_mixture(double alpha, double beta, const MixtureParams& init, const SolverSettings& settings) {
  settings.validate();
  check_mixture_size(init.m.size());
  MixtureSolution sol;
  MixtureParams x = init;
  x.p_bar = p_bar_from_q(x.q, beta);
  for (int it = 1; it <= settings.max_iter; ++it) {
    sol.iterations = it;
    MixtureParams y;
    try {
      y = mixture_rhs(x, alpha, beta, settings);
    } catch (const ConvergenceError&) {
      break;
    }
    double res = std::abs(y.q - x.q);
    for (std::size_t nu = 0; nu < x.m.size(); ++nu) res = std::max(res, std::abs(y.m[nu] - x.m[nu]));
    sol.residual = res;
    if (res < settings.tol) {
      sol.converged = true;
      break;
    }
    for (std::size_t nu = 0; nu < x.m.size(); ++nu) x.m[nu] += settings.damping * (y.m[nu] - x.m[nu]);
    x.q += settings.damping * (y.q - x.q);
    x.p_bar = p_bar_from_q(x.q, beta);
  }
  sol.params = x;
  sol.free_energy = sol.converged ? mixture_free_energy(x, alpha, beta, settings) : kNaN;
  return sol;
}

}  // namespace mhn
