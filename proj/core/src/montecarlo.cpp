#include "mhn/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "mhn/error.hpp"
#include "mhn/observables.hpp"
#include "mhn/seeding.hpp"

namespace mhn {

std::size_t McConfig::gaussian_count() const {
  return static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
}

std::size_t McConfig::measured_sweeps() const {
  const auto discarded = static_cast<std::size_t>(std::floor(thermalization_fraction * static_cast<double>(sweeps)));
  return sweeps - discarded;
}

void McConfig::validate() const {
  if (n == 0) throw std::invalid_argument("McConfig: n must be positive");
  if (!(alpha >= 0.0)) throw std::invalid_argument("McConfig: alpha must be >= 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("McConfig: beta must be >= 0");
  if (sweeps < 1) throw std::invalid_argument("McConfig: sweeps must be >= 1");
  if (!(thermalization_fraction >= 0.0 && thermalization_fraction < 1.0)) {
    throw std::invalid_argument("McConfig: thermalization_fraction must lie in [0, 1)");
  }
  if (n_replicas != 1 && n_replicas != 2) throw std::invalid_argument("McConfig: n_replicas must be 1 or 2");
  if (init.kind == InitKind::kPatternAligned && (init.pattern < 1 || init.pattern > k)) {
    throw std::invalid_argument("McConfig: pattern-aligned index " + std::to_string(init.pattern) +
                                " outside 1.." + std::to_string(k));
  }
  if (blocks < 1) throw std::invalid_argument("McConfig: blocks must be >= 1");
}

double local_field(const SpinConfiguration& sigma, const CouplingMatrix& couplings, std::size_t i) {
  if (sigma.size() != couplings.size()) throw ShapeError("local_field: size mismatch");
  if (i >= sigma.size()) throw ShapeError("local_field: site index out of range");
  const auto row = couplings.row(i);
  double h = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (j != i) h += row[j] * sigma[j];
  }
  return h;
}

FieldCache::FieldCache(const PatternSet& patterns, SpinConfiguration sigma)
    : n_(patterns.n()),
      k_(patterns.k()),
      p_(patterns.p()),
      inv_n_(1.0 / static_cast<double>(patterns.n())),
      shift_(patterns.self_interaction_shift()),
      boolean_cols_(n_ * k_),
      gaussian_cols_(n_ * p_),
      self_term_(n_, static_cast<double>(k_)),
      m_bool_(k_, 0.0),
      m_gauss_(p_, 0.0),
      sigma_(std::move(sigma)) {
  if (sigma_.size() != n_) throw ShapeError("FieldCache: configuration length != pattern n");
  for (std::size_t nu = 0; nu < k_; ++nu) {
    const auto row = patterns.boolean_row(nu);
    for (std::size_t i = 0; i < n_; ++i) {
      boolean_cols_[i * k_ + nu] = row[i];
      m_bool_[nu] += row[i] * sigma_[i];
    }
  }
  for (std::size_t mu = 0; mu < p_; ++mu) {
    const auto row = patterns.gaussian_row(mu);
    for (std::size_t i = 0; i < n_; ++i) {
      gaussian_cols_[i * p_ + mu] = row[i];
      m_gauss_[mu] += row[i] * sigma_[i];
      self_term_[i] += row[i] * row[i];
    }
  }
  for (auto& s : self_term_) s *= inv_n_;
}

double FieldCache::field(std::size_t i) const {
  const double* xb = boolean_cols_.data() + i * k_;
  const double* xg = gaussian_cols_.data() + i * p_;
  double h = 0.0;
  for (std::size_t nu = 0; nu < k_; ++nu) h += xb[nu] * m_bool_[nu];
  for (std::size_t mu = 0; mu < p_; ++mu) h += xg[mu] * m_gauss_[mu];
  return h * inv_n_ - sigma_[i] * self_term_[i];
}

void FieldCache::flip(std::size_t i) {
  const double s2 = 2.0 * sigma_[i];
  const double* xb = boolean_cols_.data() + i * k_;
  const double* xg = gaussian_cols_.data() + i * p_;
  for (std::size_t nu = 0; nu < k_; ++nu) m_bool_[nu] -= s2 * xb[nu];
  for (std::size_t mu = 0; mu < p_; ++mu) m_gauss_[mu] -= s2 * xg[mu];
  sigma_.flip(i);
}

double FieldCache::boolean_mattis(std::size_t nu) const { return m_bool_.at(nu) * inv_n_; }

double FieldCache::energy() const {
  double sq = 0.0;
  for (double m : m_bool_) sq += m * m;
  for (double g : m_gauss_) sq += g * g;
  return -0.5 * inv_n_ * sq + shift_;
}

namespace {

class Chain {
 public:
  Chain(const McConfig& cfg, const PatternSet& patterns, std::uint64_t stream_seed)
      : cfg_(cfg), rng_(stream_seed), cache_(patterns, initial_state(cfg, patterns, rng_)), order_(cfg.n) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }

  void sweep() {
    std::shuffle(order_.begin(), order_.end(), rng_);
    const double two_beta = 2.0 * cfg_.beta;
    for (std::size_t i : order_) {
      const double sh = cache_.state()[i] * cache_.field(i);
      const double u = uniform_(rng_);
      bool flip = false;
      if (cfg_.rule == UpdateRule::kGlauber) {
        flip = u < 1.0 / (1.0 + std::exp(two_beta * sh));
      } else {
        flip = sh <= 0.0 || u < std::exp(-two_beta * sh);
      }
      ++attempts_;
      if (flip) {
        cache_.flip(i);
        ++accepted_;
      }
    }
  }

  const FieldCache& cache() const { return cache_; }
  std::uint64_t attempts() const { return attempts_; }
  std::uint64_t accepted() const { return accepted_; }

 private:
  static SpinConfiguration initial_state(const McConfig& cfg, const PatternSet& patterns, std::mt19937_64& rng) {
    switch (cfg.init.kind) {
      case InitKind::kPatternAligned:
        return SpinConfiguration::aligned_with(patterns.boolean_row(cfg.init.pattern - 1));
      case InitKind::kRandom:
        return SpinConfiguration::random(cfg.n, rng);
      case InitKind::kAllUp:
        break;
    }
    return SpinConfiguration::all_up(cfg.n);
  }

  const McConfig& cfg_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  FieldCache cache_;
  std::vector<std::size_t> order_;
  std::uint64_t attempts_ = 0;
  std::uint64_t accepted_ = 0;
};

void check_consistency(const McConfig& cfg, const PatternSet& patterns) {
  cfg.validate();
  if (patterns.n() != cfg.n) throw ShapeError("run_dynamics: patterns.n() != cfg.n");
  if (patterns.k() != cfg.k) throw ShapeError("run_dynamics: patterns.k() != cfg.k");
  if (patterns.p() != cfg.gaussian_count()) {
    throw ShapeError("run_dynamics: alpha*n rounds to p = " + std::to_string(cfg.gaussian_count()) +
                     " but patterns carry p = " + std::to_string(patterns.p()));
  }
}

// Mean over all samples, error from the spread of `blocks` contiguous block means.
Estimate blocked_estimate(const std::vector<double>& samples, std::size_t blocks) {
  Estimate e;
  if (samples.empty()) return e;
  const std::size_t s = samples.size();
  e.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(s);
  const std::size_t b = std::min(blocks, s);
  if (b < 2) return e;
  std::vector<double> sums(b, 0.0);
  std::vector<std::size_t> counts(b, 0);
  for (std::size_t t = 0; t < s; ++t) {
    const std::size_t block = t * b / s;
    sums[block] += samples[t];
    ++counts[block];
  }
  double mean_of_means = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    sums[i] /= static_cast<double>(counts[i]);
    mean_of_means += sums[i];
  }
  mean_of_means /= static_cast<double>(b);
  double var = 0.0;
  for (double m : sums) var += (m - mean_of_means) * (m - mean_of_means);
  var /= static_cast<double>(b - 1);
  e.error = std::sqrt(var / static_cast<double>(b));
  return e;
}

}  // namespace

McResult run_dynamics(const McConfig& cfg, const PatternSet& patterns) {
  check_consistency(cfg, patterns);
  std::vector<Chain> chains;
  chains.reserve(static_cast<std::size_t>(cfg.n_replicas));
  for (int r = 0; r < cfg.n_replicas; ++r) chains.emplace_back(cfg, patterns, mix_seed(cfg.seed, r));

  const std::size_t measured = cfg.measured_sweeps();
  const std::size_t first_measured = cfg.sweeps - measured;
  std::vector<std::vector<double>> abs_m(cfg.k), signed_m(cfg.k);
  std::vector<double> energy, q12;
  McResult result;

  for (std::size_t t = 0; t < cfg.sweeps; ++t) {
    for (auto& c : chains) c.sweep();
    if (t < first_measured) continue;
    const FieldCache& lead = chains.front().cache();
    for (std::size_t nu = 0; nu < cfg.k; ++nu) {
      const double m = lead.boolean_mattis(nu);
      signed_m[nu].push_back(m);
      abs_m[nu].push_back(std::abs(m));
    }
    energy.push_back(lead.energy());
    if (cfg.energy_trace_stride > 0 && (t - first_measured) % cfg.energy_trace_stride == 0) {
      result.energy_trace.push_back(energy.back());
    }
    if (chains.size() == 2) q12.push_back(replica_overlap(lead.state(), chains[1].cache().state()));
  }

  for (std::size_t nu = 0; nu < cfg.k; ++nu) {
    result.mattis.push_back(blocked_estimate(abs_m[nu], cfg.blocks));
    result.mattis_signed.push_back(blocked_estimate(signed_m[nu], cfg.blocks));
  }
  result.energy = blocked_estimate(energy, cfg.blocks);
  if (chains.size() == 2) result.q12 = blocked_estimate(q12, cfg.blocks);
  std::uint64_t attempts = 0, accepted = 0;
  for (const auto& c : chains) {
    attempts += c.attempts();
    accepted += c.accepted();
  }
  result.acceptance_rate = attempts ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0;
  result.samples = measured;
  return result;
}

std::vector<double> empirical_state_frequencies(const McConfig& cfg, const PatternSet& patterns) {
  check_consistency(cfg, patterns);
  if (cfg.n > 20) throw SizeError("empirical_state_frequencies: n > 20");
  Chain chain(cfg, patterns, mix_seed(cfg.seed, 0));
  std::vector<double> freq(std::size_t{1} << cfg.n, 0.0);
  const std::size_t measured = cfg.measured_sweeps();
  const std::size_t first_measured = cfg.sweeps - measured;
  for (std::size_t t = 0; t < cfg.sweeps; ++t) {
    chain.sweep();
    if (t >= first_measured) freq[chain.cache().state().to_index()] += 1.0;
  }
  for (auto& f : freq) f /= static_cast<double>(measured);
  return freq;
}

double retrieval_trial(std::size_t n, double alpha, std::size_t k, double beta, std::size_t sweeps,
                       std::uint64_t seed) {
  McConfig cfg;
  cfg.n = n;
  cfg.alpha = alpha;
  cfg.k = k;
  cfg.beta = beta;
  cfg.sweeps = sweeps;
  cfg.thermalization_fraction = 0.75;
  cfg.init = {InitKind::kPatternAligned, 1};
  cfg.seed = seed;
  const auto patterns = PatternSet::generate(n, k, cfg.gaussian_count(), seed);
  return run_dynamics(cfg, patterns).mattis.at(0).mean;
}

std::string_view to_string(RetrievalVerdict v) {
  switch (v) {
    case RetrievalVerdict::kRetrieved:
      return "retrieved";
    case RetrievalVerdict::kNotRetrieved:
      return "not-retrieved";
    case RetrievalVerdict::kAmbiguous:
      return "ambiguous";
  }
  return "unknown";
}

RetrievalVerdict classify_retrieval(double abs_m, double low, double high) {
  if (!(low >= 0.0 && low < high && high <= 1.0)) {
    throw std::invalid_argument("classify_retrieval: need 0 <= low < high <= 1");
  }
  if (abs_m >= high) return RetrievalVerdict::kRetrieved;
  if (abs_m <= low) return RetrievalVerdict::kNotRetrieved;
  return RetrievalVerdict::kAmbiguous;
}

}  // namespace mhn
