#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhn/rs_solver.hpp"

namespace mhn::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNonConvergence = 2, kIo = 3 };

// Solver flags shared by solve, scan and boundaries.
struct SolverFlags {
  int nodes = 64;
  double damping = 0.5;
  double tol = 1e-12;
  int max_iter = 200000;
  double epsilon = 1e-9;
  std::string scheme = "kink";  // kink | hermite

  SolverSettings settings() const;
};

struct VerifyOptions {
  std::size_t n = 6;
  std::size_t k = 0;
  std::size_t p = 2;
  double beta = 0.8;
  std::size_t trials = 20;
  int nodes = 96;
  std::size_t max_n = 24;
  double threshold = 1e-8;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out;
};

struct SolveOptions {
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
  SolverFlags solver;
  std::uint64_t seed = 0;
  std::string out;
};

struct ScanOptions {
  double alpha_min = 0.0, alpha_max = 0.2;
  double beta_min = 0.5, beta_max = 5.0;
  int alpha_points = 20, beta_points = 20;
  double gamma = 0.0;
  SolverFlags solver;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out;
};

struct McOptions {
  std::size_t n = 2000;
  double alpha = 0.05;
  std::size_t k = 1;
  double beta = 5.0;
  std::size_t sweeps = 2000;
  double thermalization = 0.5;
  std::string init = "aligned";  // aligned | random | all-up
  std::size_t pattern = 1;
  int replicas = 1;
  std::string rule = "glauber";  // glauber | metropolis
  std::size_t trials = 1;
  // |m1| thresholds for the printed retrieval verdict.
  double retrieval_low = 0.2;
  double retrieval_high = 0.8;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out;
};

struct BoundariesOptions {
  std::vector<double> alphas{0.01, 0.05, 0.1, 0.2, 0.5, 1.0};
  std::vector<double> betas{1.5, 2.0, 3.0, 5.0, 50.0};
  double beta_width = 1e-4;
  double alpha_width = 1e-4;
  SolverFlags solver;
  std::uint64_t seed = 0;
  std::string out;
};

// Missing keys keep their defaults, so older manifests still load.
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SolverFlags, nodes, damping, tol, max_iter, epsilon, scheme)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VerifyOptions, n, k, p, beta, trials, nodes, max_n, threshold, seed,
                                                jobs, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SolveOptions, alpha, beta, gamma, solver, seed, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScanOptions, alpha_min, alpha_max, beta_min, beta_max, alpha_points,
                                                beta_points, gamma, solver, seed, jobs, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(McOptions, n, alpha, k, beta, sweeps, thermalization, init, pattern,
                                                replicas, rule, trials, retrieval_low, retrieval_high, seed, jobs,
                                                out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BoundariesOptions, alphas, betas, beta_width, alpha_width, solver, seed,
                                                out)

// Each command writes its data file (default name under $MHN_OUTPUT_DIR, or
// the working directory) plus a manifest next to it, and returns an ExitCode.
// Errors are reported on `err`; `out` gets a human-readable summary (solve
// prints its JSON record there).
int run_verify_equivalence(const VerifyOptions& o, std::ostream& out, std::ostream& err);
int run_solve(const SolveOptions& o, std::ostream& out, std::ostream& err);
int run_scan(const ScanOptions& o, std::ostream& out, std::ostream& err);
int run_mc(const McOptions& o, std::ostream& out, std::ostream& err);
int run_boundaries(const BoundariesOptions& o, std::ostream& out, std::ostream& err);

// Re-runs the command recorded in a manifest. A non-empty `out_override`
// replaces the recorded data path.
int run_replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out,
               std::ostream& err);

}  // namespace mhn::cli
