#pragma once

#include <cmath>
#include <memory>
#include <vector>

namespace mhn {

/// Nodes and weights for E_{z~N(0,1)} f(z) ~= sum_i w_i f(z_i).
///
/// Built from the physicists' Gauss-Hermite rule (weight e^{-x^2}) by
/// z_i = sqrt(2) x_i and w_i = w_i^H / sqrt(pi), so the weights sum to one.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  // Cached, immutable, safe to share between threads.
  static std::shared_ptr<const GaussHermiteRule> get(int n);
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static std::shared_ptr<const GaussLegendreRule> get(int n);
};

GaussHermiteRule compute_gauss_hermite(int n);
GaussLegendreRule compute_gauss_legendre(int n);

/// Gauss-Hermite estimate of E_{eta~N(0,1)} f(eta). Requires n >= 1; the
/// rule is exact for polynomials of degree <= 2n-1.
template <typename F>
double gaussian_expectation(F&& f, int nodes) {
  const auto rule = GaussHermiteRule::get(nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) sum += rule->weights[i] * f(rule->nodes[i]);
  return sum;
}

/// Panel layout for E_eta g(a + s eta) when g has an O(1) feature at 0,
/// e.g. tanh, tanh^2, ln cosh. Panels are graded geometrically away from the
/// kink eta0 = -a/s (panel width ~1/s there, capped at 1) and cover
/// [-kTruncation, kTruncation]; the Gaussian tail beyond is below 1e-18.
class KinkPanels {
 public:
  static constexpr double kTruncation = 9.0;

  // `center` is the kink location eta0 itself, `scale` is |s|.
  KinkPanels(double center, double scale, int points_per_panel);

  // Calls visit(eta, weight) for every quadrature point; weights include the
  // standard-normal density.
  template <typename Visit>
  void for_each(Visit&& visit) const {
    const auto& rule = *rule_;
    for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
      const double lo = edges_[p];
      const double hi = edges_[p + 1];
      const double mid = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double eta = mid + half * rule.nodes[i];
        visit(eta, half * rule.weights[i] * kInvSqrt2Pi * std::exp(-0.5 * eta * eta));
      }
    }
  }

  std::size_t panel_count() const { return edges_.size() - 1; }

 private:
  static constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  std::vector<double> edges_;
  std::shared_ptr<const GaussLegendreRule> rule_;
};

/// E_eta f(eta) integrated on KinkPanels placed around eta = center with
/// innermost width ~1/scale.
template <typename F>
double gaussian_expectation_split(F&& f, double center, double scale, int points_per_panel) {
  double sum = 0.0;
  KinkPanels(center, scale, points_per_panel).for_each([&](double eta, double w) { sum += w * f(eta); });
  return sum;
}

}  // namespace mhn
