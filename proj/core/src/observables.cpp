#include "mhn/observables.hpp"

#include <string>

#include "mhn/error.hpp"

namespace mhn {
namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ShapeError(std::string(what) + ": length " + std::to_string(got) + " != " +
                     std::to_string(want));
  }
}

template <typename T>
double mattis_impl(const SpinConfiguration& sigma, std::span<const T> row) {
  require_size(row.size(), sigma.size(), "mattis_magnetization");
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) sum += static_cast<double>(row[i]) * sigma[i];
  return sum / static_cast<double>(sigma.size());
}

}  // namespace

double mixed_hamiltonian(const SpinConfiguration& sigma, const PatternSet& patterns) {
  const std::size_t n = patterns.n();
  require_size(sigma.size(), n, "mixed_hamiltonian");
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double coupling = 0.0;
      for (std::size_t nu = 0; nu < patterns.k(); ++nu) {
        const auto row = patterns.boolean_row(nu);
        coupling += static_cast<double>(row[i] * row[j]);
      }
      for (std::size_t mu = 0; mu < patterns.p(); ++mu) {
        const auto row = patterns.gaussian_row(mu);
        coupling += row[i] * row[j];
      }
      h -= coupling * sigma[i] * sigma[j];
    }
  }
  return h / static_cast<double>(n);
}

double full_form_hamiltonian(const SpinConfiguration& sigma, const PatternSet& patterns) {
  require_size(sigma.size(), patterns.n(), "full_form_hamiltonian");
  double sum_sq = 0.0;
  for (std::size_t nu = 0; nu < patterns.k(); ++nu) {
    const double m = mattis_magnetization(sigma, patterns.boolean_row(nu));
    sum_sq += m * m;
  }
  for (std::size_t mu = 0; mu < patterns.p(); ++mu) {
    const double m = mattis_magnetization(sigma, patterns.gaussian_row(mu));
    sum_sq += m * m;
  }
  return -0.5 * static_cast<double>(patterns.n()) * sum_sq;
}

double mattis_magnetization(const SpinConfiguration& sigma, std::span<const double> pattern_row) {
  return mattis_impl(sigma, pattern_row);
}

double mattis_magnetization(const SpinConfiguration& sigma, std::span<const Spin> pattern_row) {
  return mattis_impl(sigma, pattern_row);
}

double replica_overlap(const SpinConfiguration& a, const SpinConfiguration& b) {
  require_size(b.size(), a.size(), "replica_overlap");
  if (a.size() == 0) throw ShapeError("replica_overlap: empty configuration");
  long sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return static_cast<double>(sum) / static_cast<double>(a.size());
}

double hidden_overlap(std::span<const double> z_a, std::span<const double> z_b) {
  require_size(z_b.size(), z_a.size(), "hidden_overlap");
  if (z_a.empty()) throw ShapeError("hidden_overlap: p = 0, mean undefined");
  double sum = 0.0;
  for (std::size_t mu = 0; mu < z_a.size(); ++mu) sum += z_a[mu] * z_b[mu];
  return sum / static_cast<double>(z_a.size());
}

Observables measure(const SpinConfiguration& sigma, const PatternSet& patterns) {
  require_size(sigma.size(), patterns.n(), "measure");
  Observables obs;
  obs.mattis.reserve(patterns.k() + patterns.p());
  double sum_sq = 0.0;
  for (std::size_t nu = 0; nu < patterns.k(); ++nu) {
    obs.mattis.push_back(mattis_magnetization(sigma, patterns.boolean_row(nu)));
    sum_sq += obs.mattis.back() * obs.mattis.back();
  }
  for (std::size_t mu = 0; mu < patterns.p(); ++mu) {
    obs.mattis.push_back(mattis_magnetization(sigma, patterns.gaussian_row(mu)));
    sum_sq += obs.mattis.back() * obs.mattis.back();
  }
  obs.energy = -0.5 * static_cast<double>(patterns.n()) * sum_sq + patterns.self_interaction_shift();
  return obs;
}

}  // namespace mhn
