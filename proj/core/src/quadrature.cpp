#include "mhn/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "mhn/error.hpp"

namespace mhn {
namespace {

template <typename Rule, typename Make>
std::shared_ptr<const Rule> cached(int n, Make make) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const Rule>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_shared<const Rule>(make(n))).first;
  return it->second;
}

}  // namespace

// Newton iteration on the orthonormal Hermite recurrence with the classical
// asymptotic starting guesses for the roots, largest first.
GaussHermiteRule compute_gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Hermite rule needs n >= 1");
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  std::vector<double> x(n), w(n);
  const int half = (n + 1) / 2;
  // Number of eigenvalues of the Jacobi matrix (zero diagonal, off-diagonal
  // sqrt(j/2)) below t, i.e. roots of H_n below t, by a Sturm sequence.
  auto count_below = [n](double t) {
    int count = 0;
    double d = -t;
    if (d < 0.0) ++count;
    for (int j = 1; j < n; ++j) {
      if (d == 0.0) d = 1e-300;
      d = -t - (0.5 * j) / d;
      if (d < 0.0) ++count;
    }
    return count;
  };
  const double bound = std::sqrt(2.0 * n + 1.0) + 1.0;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // The (i+1)-th largest root: bisect until the bracket is tight, then polish.
    double lo = 0.0, hi = (i == 0) ? bound : x[i - 1];
    for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(mid) >= n - i) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    z = 0.5 * (lo + hi);
    // Recurrence on the Hermite functions h_j(z) exp(-z^2/2), which stay
    // bounded where the bare polynomials overflow (n beyond ~150).
    auto evaluate = [n, pim4](double z, double& pp) {
      double p1 = pim4 * std::exp(-0.5 * z * z);
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      return p1;
    };
    double pp = 0.0;
    int iter = 0;
    for (; iter < 100; ++iter) {
      const double z1 = z;
      z = z1 - evaluate(z1, pp) / pp;  // the common exp factor cancels
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        evaluate(z, pp);
        break;
      }
    }
    if (iter == 100) throw ConvergenceError("Gauss-Hermite root iteration did not converge");
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 * std::exp(-z * z) / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  // Ascending order.
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
    rule.weights[i] = w[n - 1 - i] * inv_sqrt_pi;
  }
  return rule;
}

GaussLegendreRule compute_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::shared_ptr<const GaussHermiteRule> GaussHermiteRule::get(int n) {
  return cached<GaussHermiteRule>(n, compute_gauss_hermite);
}

std::shared_ptr<const GaussLegendreRule> GaussLegendreRule::get(int n) {
  return cached<GaussLegendreRule>(n, compute_gauss_legendre);
}

KinkPanels::KinkPanels(double center, double scale, int points_per_panel)
    : rule_(GaussLegendreRule::get(points_per_panel)) {
  constexpr double kMaxWidth = 1.0;
  const double lim = kTruncation;
  const double c = std::clamp(center, -lim, lim);
  const double base = (scale > 0.0) ? std::min(kMaxWidth, 0.5 / scale) : kMaxWidth;

  std::vector<double> left;
  double width = base;
  for (double x = c; x > -lim;) {
    x = std::max(-lim, x - width);
    left.push_back(x);
    width = std::min(kMaxWidth, 2.0 * width);
  }
  edges_.assign(left.rbegin(), left.rend());
  edges_.push_back(c);
  width = base;
  for (double x = c; x < lim;) {
    x = std::min(lim, x + width);
    edges_.push_back(x);
    width = std::min(kMaxWidth, 2.0 * width);
  }
  // A kink sitting on the boundary leaves a zero-width panel; drop it.
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

}  // namespace mhn
