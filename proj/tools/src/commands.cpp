#include "mhn_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "mhn/error.hpp"
#include "mhn/exact.hpp"
#include "mhn/montecarlo.hpp"
#include "mhn/phase_diagram.hpp"
#include "mhn/seeding.hpp"
#include "mhn_cli/io.hpp"
#include "mhn_cli/manifest.hpp"

namespace fs = std::filesystem;

namespace mhn::cli {

SolverSettings SolverFlags::settings() const {
  SolverSettings s;
  s.quadrature_nodes = nodes;
  s.damping = damping;
  s.tol = tol;
  s.max_iter = max_iter;
  s.singularity_epsilon = epsilon;
  if (scheme == "kink") {
    s.scheme = QuadratureScheme::kKinkPanels;
  } else if (scheme == "hermite") {
    s.scheme = QuadratureScheme::kGaussHermite;
  } else {
    throw std::invalid_argument("unknown quadrature scheme '" + scheme + "' (expected kink or hermite)");
  }
  s.validate();
  return s;
}

namespace {

fs::path resolve_out(const std::string& out, const char* default_name) {
  if (!out.empty()) return out;
  const char* dir = std::getenv("MHN_OUTPUT_DIR");
  return fs::path(dir && *dir ? dir : ".") / default_name;
}

// Maps the library's exception types onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

template <class Options>
void persist(const char* command, Options o, const fs::path& data_path, const std::string& content) {
  o.out = data_path.string();
  write_file(data_path, content);
  RunManifest m;
  m.command = command;
  m.full_config = o;
  m.seed = o.seed;
  m.tool_version = tool_version();
  m.timestamp = utc_timestamp();
  m.output_paths = {data_path.string()};
  write_manifest(m, manifest_path_for(data_path));
}

// Runs task(i) for i in [0, count) on up to `jobs` threads; task writes only
// to its own slot, so the result does not depend on scheduling.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int run_verify_equivalence(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.trials < 1) throw std::invalid_argument("verify-equivalence: trials must be >= 1");
    EnumerationOptions eo;
    eo.max_n = o.max_n;
    eo.jobs = o.jobs;
    nlohmann::json records = nlohmann::json::array();
    double max_abs = 0.0, max_rel = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const std::uint64_t seed = mix_seed(o.seed, t);
      const auto patterns = PatternSet::generate(o.n, o.k, o.p, seed);
      const double a = partition_ahn_exact(patterns, o.beta, eo).log_z;
      const double b = partition_rbm_quadrature(patterns, o.beta, o.nodes, eo).log_z;
      const double diff = std::abs(a - b);
      max_abs = std::max(max_abs, diff);
      max_rel = std::max(max_rel, diff / std::abs(a));
      records.push_back({{"trial", t}, {"patterns", pattern_snapshot(patterns)}, {"log_z_ahn", a}, {"log_z_rbm", b},
                         {"abs_diff", diff}});
    }
    const bool pass = max_rel < o.threshold;
    nlohmann::json report{{"schema", "mhn.verify.v1"},
                          {"n", o.n},
                          {"k", o.k},
                          {"p", o.p},
                          {"beta", o.beta},
                          {"nodes", o.nodes},
                          {"trials", o.trials},
                          {"seed", o.seed},
                          {"max_abs_discrepancy", max_abs},
                          {"max_rel_discrepancy", max_rel},
                          {"threshold", o.threshold},
                          {"pass", pass},
                          {"records", records}};
    const fs::path path = resolve_out(o.out, "verify_equivalence.json");
    persist("verify-equivalence", o, path, report.dump(2) + "\n");
    out << "max relative log Z discrepancy " << format_double(max_rel) << " over " << o.trials << " disorders ("
        << (pass ? "pass" : "FAIL") << ")\n";
    return pass ? kOk : kNonConvergence;
  });
}

int run_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SolverSettings settings = o.solver.settings();
    const ConjectureResult r = conjecture_shift(o.alpha, o.gamma, o.beta, settings);
    const nlohmann::json record = branch_set_record(r.branches, o.alpha, o.beta, o.gamma, settings);
    const std::string text = record.dump(2) + "\n";
    persist("solve", o, resolve_out(o.out, "solve.json"), text);
    out << text;
    if (r.branches.branches.empty()) {
      err << "error: no start converged\n";
      return kNonConvergence;
    }
    return kOk;
  });
}

int run_scan(const ScanOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    GridSpec grid;
    grid.alpha_min = o.alpha_min;
    grid.alpha_max = o.alpha_max;
    grid.beta_min = o.beta_min;
    grid.beta_max = o.beta_max;
    grid.alpha_points = o.alpha_points;
    grid.beta_points = o.beta_points;
    grid.gamma = o.gamma;
    const auto points = scan_grid(grid, o.solver.settings(), o.jobs);
    std::ostringstream csv;
    write_grid_csv(csv, points);
    const fs::path path = resolve_out(o.out, "scan.csv");
    persist("scan", o, path, csv.str());
    const auto failed = std::count_if(points.begin(), points.end(), [](const PhasePoint& p) { return !p.error.empty(); });
    out << "wrote " << points.size() << " grid points to " << path.string() << " (" << failed << " failed)\n";
    return kOk;
  });
}

namespace {

McConfig mc_config(const McOptions& o, std::uint64_t seed) {
  McConfig cfg;
  cfg.n = o.n;
  cfg.alpha = o.alpha;
  cfg.k = o.k;
  cfg.beta = o.beta;
  cfg.sweeps = o.sweeps;
  cfg.thermalization_fraction = o.thermalization;
  if (o.init == "aligned") {
    cfg.init = {InitKind::kPatternAligned, o.pattern};
  } else if (o.init == "random") {
    cfg.init = {InitKind::kRandom, o.pattern};
  } else if (o.init == "all-up") {
    cfg.init = {InitKind::kAllUp, o.pattern};
  } else {
    throw std::invalid_argument("unknown init '" + o.init + "' (expected aligned, random or all-up)");
  }
  if (o.rule == "glauber") {
    cfg.rule = UpdateRule::kGlauber;
  } else if (o.rule == "metropolis") {
    cfg.rule = UpdateRule::kMetropolis;
  } else {
    throw std::invalid_argument("unknown rule '" + o.rule + "' (expected glauber or metropolis)");
  }
  cfg.n_replicas = o.replicas;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int run_mc(const McOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.trials < 1) throw std::invalid_argument("mc: trials must be >= 1");
    classify_retrieval(0.0, o.retrieval_low, o.retrieval_high);
    mc_config(o, o.seed);  // validate before spawning workers
    std::vector<McRow> rows(o.trials);
    // Trial t draws disorder and thermal noise from seed + t.
    parallel_for(o.trials, o.jobs, [&](std::size_t t) {
      const std::uint64_t seed = o.seed + t;
      McRow& row = rows[t];
      row.seed = seed;
      row.cfg = mc_config(o, seed);
      const auto patterns = PatternSet::generate(o.n, o.k, row.cfg.gaussian_count(), seed);
      row.result = run_dynamics(row.cfg, patterns);
    });
    std::ostringstream csv;
    write_mc_csv(csv, rows);
    const fs::path path = resolve_out(o.out, "mc.csv");
    persist("mc", o, path, csv.str());
    for (const auto& r : rows) {
      out << "seed " << r.seed << ": m1 = " << format_double(r.result.mattis.at(0).mean) << " +- "
          << format_double(r.result.mattis.at(0).error) << " ("
          << to_string(classify_retrieval(r.result.mattis.at(0).mean, o.retrieval_low, o.retrieval_high)) << ")\n";
    }
    return kOk;
  });
}

int run_boundaries(const BoundariesOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SolverSettings settings = o.solver.settings();
    BisectionOptions bo;
    bo.beta_width = o.beta_width;
    bo.alpha_width = o.alpha_width;
    nlohmann::json curves = nlohmann::json::array();
    curves.push_back(boundary_record(second_order_curve(o.alphas, settings, bo)));
    curves.push_back(boundary_record(existence_curve(o.betas, settings, bo)));
    curves.push_back(boundary_record(first_order_curve(o.betas, settings, bo)));
    nlohmann::json analytic = nlohmann::json::array();
    std::vector<double> alphas = o.alphas;
    std::sort(alphas.begin(), alphas.end());
    for (double a : alphas) analytic.push_back({{"alpha", a}, {"beta", second_order_line_analytic(a)}});
    nlohmann::json doc{{"schema", "mhn.boundaries.v1"},
                       {"ordering", std::string(kOrderingConvention)},
                       {"curves", curves},
                       {"second_order_analytic", analytic}};
    if (std::any_of(o.betas.begin(), o.betas.end(), [](double b) { return b >= 50.0; })) {
      doc["warning"] = "finite beta used as a proxy for T -> 0";
    }
    const fs::path path = resolve_out(o.out, "boundaries.json");
    persist("boundaries", o, path, doc.dump(2) + "\n");
    out << "wrote boundary curves to " << path.string() << '\n';
    return kOk;
  });
}

int run_replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out,
               std::ostream& err) {
  RunManifest m;
  const int rc = guarded(err, [&] {
    m = read_manifest(manifest_path);
    return kOk;
  });
  if (rc != kOk) return rc;
  auto run = [&](auto options, auto fn) {
    return guarded(err, [&] {
      m.full_config.get_to(options);
      if (!out_override.empty()) options.out = out_override;
      return fn(options, out, err);
    });
  };
  if (m.command == "verify-equivalence") return run(VerifyOptions{}, run_verify_equivalence);
  if (m.command == "solve") return run(SolveOptions{}, run_solve);
  if (m.command == "scan") return run(ScanOptions{}, run_scan);
  if (m.command == "mc") return run(McOptions{}, run_mc);
  if (m.command == "boundaries") return run(BoundariesOptions{}, run_boundaries);
  err << "error: manifest names unknown command '" << m.command << "'\n";
  return kUsage;
}

}  // namespace mhn::cli
