#include "mhn/exact.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <thread>

#include "mhn/error.hpp"
#include "mhn/quadrature.hpp"
#include "mhn/seeding.hpp"

namespace mhn {
namespace {

// Streaming log-sum-exp with max subtraction.
struct LogSum {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max) {
      sum += std::exp(x - max);
    } else {
      sum = sum * std::exp(max - x) + 1.0;
      max = x;
    }
  }
  void merge(const LogSum& other) {
    if (other.sum == 0.0) return;
    if (sum == 0.0) {
      *this = other;
      return;
    }
    if (other.max <= max) {
      sum += other.sum * std::exp(other.max - max);
    } else {
      sum = sum * std::exp(max - other.max) + other.sum;
      max = other.max;
    }
  }
  double value() const { return max + std::log(sum); }
};

void check_size(const PatternSet& patterns, const EnumerationOptions& options) {
  if (patterns.n() > options.max_n || patterns.n() > 62) {
    throw SizeError("exact enumeration refused: n = " + std::to_string(patterns.n()) +
                    " exceeds bound " + std::to_string(std::min<std::size_t>(options.max_n, 62)));
  }
}

// Transposed (neuron-major) copies of the pattern matrices.
struct ColumnPatterns {
  std::size_t n, k, p;
  std::vector<double> boolean;   // n x k
  std::vector<double> gaussian;  // n x p

  explicit ColumnPatterns(const PatternSet& set)
      : n(set.n()), k(set.k()), p(set.p()), boolean(n * k), gaussian(n * p) {
    for (std::size_t nu = 0; nu < k; ++nu) {
      const auto row = set.boolean_row(nu);
      for (std::size_t i = 0; i < n; ++i) boolean[i * k + nu] = row[i];
    }
    for (std::size_t mu = 0; mu < p; ++mu) {
      const auto row = set.gaussian_row(mu);
      for (std::size_t i = 0; i < n; ++i) gaussian[i * p + mu] = row[i];
    }
  }
};

// Overlap state for one visible configuration: M_nu and G_mu, unnormalized.
struct OverlapState {
  const ColumnPatterns* cols;
  std::vector<Spin> sigma;
  std::vector<double> m_bool;
  std::vector<double> m_gauss;

  OverlapState(const ColumnPatterns& c, std::uint64_t index)
      : cols(&c), sigma(c.n), m_bool(c.k, 0.0), m_gauss(c.p, 0.0) {
    for (std::size_t i = 0; i < c.n; ++i) {
      sigma[i] = ((index >> i) & 1U) ? Spin{1} : Spin{-1};
      for (std::size_t nu = 0; nu < c.k; ++nu) m_bool[nu] += c.boolean[i * c.k + nu] * sigma[i];
      for (std::size_t mu = 0; mu < c.p; ++mu) m_gauss[mu] += c.gaussian[i * c.p + mu] * sigma[i];
    }
  }

  void flip(std::size_t i) {
    const double s2 = 2.0 * sigma[i];
    for (std::size_t nu = 0; nu < cols->k; ++nu) m_bool[nu] -= s2 * cols->boolean[i * cols->k + nu];
    for (std::size_t mu = 0; mu < cols->p; ++mu) m_gauss[mu] -= s2 * cols->gaussian[i * cols->p + mu];
    sigma[i] = static_cast<Spin>(-sigma[i]);
  }

  double boolean_square() const {
    double s = 0.0;
    for (double m : m_bool) s += m * m;
    return s;
  }
  double gaussian_square() const {
    double s = 0.0;
    for (double m : m_gauss) s += m * m;
    return s;
  }
};

// Sums exp(term(state)) over all 2^n configurations. The index space is cut
// into chunks by the top bits; each chunk walks its low bits in Gray-code
// order and the chunk sums are merged in index order, so the result does not
// depend on the number of workers.
template <typename MakeState, typename Term>
double enumerate_log_sum(std::size_t n, unsigned jobs, MakeState make_state, Term term) {
  unsigned workers = jobs ? jobs : std::max(1U, std::thread::hardware_concurrency());
  std::size_t top_bits = 0;
  if (n >= 16) top_bits = std::min<std::size_t>(6, n - 10);
  const std::size_t low_bits = n - top_bits;
  const std::uint64_t chunks = std::uint64_t{1} << top_bits;
  const std::uint64_t steps = std::uint64_t{1} << low_bits;

  auto run_chunk = [&](std::uint64_t c) {
    LogSum acc;
    auto state = make_state(c << low_bits);
    acc.add(term(state));
    for (std::uint64_t g = 1; g < steps; ++g) {
      state.flip(static_cast<std::size_t>(std::countr_zero(g)));
      acc.add(term(state));
    }
    return acc;
  };

  std::vector<LogSum> partial(chunks);
  if (workers <= 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) partial[c] = run_chunk(c);
  } else {
    std::vector<std::future<void>> tasks;
    std::atomic<std::uint64_t> next{0};
    for (unsigned w = 0; w < std::min<std::uint64_t>(workers, chunks); ++w) {
      tasks.push_back(std::async(std::launch::async, [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) partial[c] = run_chunk(c);
      }));
    }
    for (auto& t : tasks) t.get();
  }
  LogSum total;
  for (const auto& part : partial) total.merge(part);
  return total.value();
}

// Pair-sum energy state driven by the dense couplings.
struct PairState {
  const CouplingMatrix* j;
  std::vector<Spin> sigma;
  double energy = 0.0;

  PairState(const CouplingMatrix& couplings, std::uint64_t index)
      : j(&couplings), sigma(couplings.size()) {
    const std::size_t n = couplings.size();
    for (std::size_t i = 0; i < n; ++i) sigma[i] = ((index >> i) & 1U) ? Spin{1} : Spin{-1};
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) energy -= couplings(a, b) * sigma[a] * sigma[b];
    }
  }

  void flip(std::size_t i) {
    const auto row = j->row(i);
    double h = 0.0;
    for (std::size_t b = 0; b < sigma.size(); ++b) h += row[b] * sigma[b];
    energy += 2.0 * sigma[i] * h;
    sigma[i] = static_cast<Spin>(-sigma[i]);
  }
};

}  // namespace

ExactResult partition_ahn_exact(const PatternSet& patterns, double beta,
                                const EnumerationOptions& options) {
  check_size(patterns, options);
  const ColumnPatterns cols(patterns);
  const double scale = beta / (2.0 * static_cast<double>(patterns.n()));
  const double log_z = enumerate_log_sum(
      patterns.n(), options.jobs, [&](std::uint64_t index) { return OverlapState(cols, index); },
      [&](const OverlapState& s) { return scale * (s.boolean_square() + s.gaussian_square()); });
  return {log_z, patterns.n(), beta};
}

ExactResult partition_pairwise_exact(const PatternSet& patterns, double beta,
                                     const EnumerationOptions& options) {
  check_size(patterns, options);
  const CouplingMatrix couplings = hebbian_couplings(patterns);
  const double log_z = enumerate_log_sum(
      patterns.n(), options.jobs, [&](std::uint64_t index) { return PairState(couplings, index); },
      [&](const PairState& s) { return -beta * s.energy; });
  return {log_z, patterns.n(), beta};
}

ExactResult partition_rbm_quadrature(const PatternSet& patterns, double beta, int nodes,
                                     const EnumerationOptions& options) {
  check_size(patterns, options);
  if (patterns.p() > options.max_p_quadrature) {
    throw SizeError("quadrature route refused: p = " + std::to_string(patterns.p()) + " exceeds bound " +
                    std::to_string(options.max_p_quadrature));
  }
  if (nodes < options.min_nodes) {
    throw SizeError("quadrature route refused: nodes = " + std::to_string(nodes) + " below " +
                    std::to_string(options.min_nodes));
  }
  const ColumnPatterns cols(patterns);
  const auto rule = GaussHermiteRule::get(nodes);
  const double n = static_cast<double>(patterns.n());
  const double boolean_scale = beta / (2.0 * n);
  const double coupling = std::sqrt(beta / n);

  // log E_z exp(b z), integrated node by node in log space.
  auto log_hidden = [&](double b) {
    LogSum acc;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      acc.add(std::log(rule->weights[i]) + b * rule->nodes[i]);
    }
    return acc.value();
  };

  const double log_z = enumerate_log_sum(
      patterns.n(), options.jobs, [&](std::uint64_t index) { return OverlapState(cols, index); },
      [&](const OverlapState& s) {
        double term = boolean_scale * s.boolean_square();
        for (double g : s.m_gauss) term += log_hidden(coupling * g);
        return term;
      });
  return {log_z, patterns.n(), beta};
}

QuenchedEstimate quenched_free_energy_finite(std::size_t n, std::size_t k, std::size_t p, double beta,
                                             std::size_t n_disorder_samples, std::uint64_t seed,
                                             const EnumerationOptions& options) {
  if (n_disorder_samples < 2) {
    throw std::invalid_argument("quenched_free_energy_finite: need at least 2 disorder samples");
  }
  std::vector<double> values(n_disorder_samples);
  for (std::size_t s = 0; s < n_disorder_samples; ++s) {
    const auto patterns = PatternSet::generate(n, k, p, mix_seed(seed, s));
    values[s] = partition_ahn_exact(patterns, beta, options).log_z / static_cast<double>(n);
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(values.size())), values.size()};
}

std::vector<double> boltzmann_probabilities(const PatternSet& patterns, double beta,
                                            const EnumerationOptions& options) {
  check_size(patterns, options);
  const CouplingMatrix couplings = hebbian_couplings(patterns);
  const std::uint64_t states = std::uint64_t{1} << patterns.n();
  std::vector<double> log_w(states);
  for (std::uint64_t idx = 0; idx < states; ++idx) {
    log_w[idx] = -beta * PairState(couplings, idx).energy;
  }
  const double log_z = partition_pairwise_exact(patterns, beta, options).log_z;
  for (auto& w : log_w) w = std::exp(w - log_z);
  return log_w;
}

}  // namespace mhn
