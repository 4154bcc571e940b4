#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mhn_cli/commands.hpp"
#include "mhn_cli/manifest.hpp"

namespace {

using namespace mhn::cli;

void add_solver_flags(CLI::App* cmd, SolverFlags& s) {
  cmd->add_option("--nodes", s.nodes, "Quadrature resolution (Gauss-Hermite nodes, or 4x Legendre points per panel)");
  cmd->add_option("--damping", s.damping, "Initial damping lambda in (0, 1]");
  cmd->add_option("--tol", s.tol, "Convergence tolerance on the max-component residual");
  cmd->add_option("--max-iter", s.max_iter, "Iteration cap per start");
  cmd->add_option("--epsilon", s.epsilon, "Lower bound on 1 - beta(1 - q)");
  cmd->add_option("--scheme", s.scheme, "Quadrature scheme")->check(CLI::IsMember({"kink", "hermite"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed Hebbian network: exact oracle, RS solver, phase diagram and Monte Carlo"};
  app.set_version_flag("--version", tool_version());
  app.set_config("--config", "", "Key = value config file; command-line flags take precedence");
  app.require_subcommand(1);

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify-equivalence", "Compare the Hopfield and RBM partition functions by enumeration");
  v->add_option("--n", verify.n, "Neurons");
  v->add_option("--k", verify.k, "Boolean patterns");
  v->add_option("--p", verify.p, "Gaussian patterns (hidden units)");
  v->add_option("--beta", verify.beta, "Inverse temperature");
  v->add_option("--trials", verify.trials, "Random disorders");
  v->add_option("--nodes", verify.nodes, "Gauss-Hermite nodes per hidden unit");
  v->add_option("--max-n", verify.max_n, "Enumeration cap on n");
  v->add_option("--threshold", verify.threshold, "Pass threshold on the relative log Z discrepancy");
  v->add_option("--seed", verify.seed, "Base seed");
  v->add_option("--jobs", verify.jobs, "Worker threads (0 = all cores)");
  v->add_option("--out", verify.out, "Report path (JSON)");

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Enumerate replica-symmetric branches at one (alpha, beta)");
  s->add_option("--alpha", solve.alpha, "Gaussian load p/N")->required();
  s->add_option("--beta", solve.beta, "Inverse temperature")->required();
  s->add_option("--gamma", solve.gamma, "Shift alpha -> alpha + gamma");
  add_solver_flags(s, solve.solver);
  s->add_option("--seed", solve.seed, "Recorded in the manifest (the solver is deterministic)");
  s->add_option("--out", solve.out, "Record path (JSON)");

  ScanOptions scan;
  auto* g = app.add_subcommand("scan", "Classify an (alpha, beta) grid");
  g->add_option("--alpha-min", scan.alpha_min, "First alpha of the grid");
  g->add_option("--alpha-max", scan.alpha_max, "Last alpha of the grid");
  g->add_option("--beta-min", scan.beta_min, "First beta of the grid");
  g->add_option("--beta-max", scan.beta_max, "Last beta of the grid");
  g->add_option("--alpha-points", scan.alpha_points, "Alpha grid points (endpoints included)");
  g->add_option("--beta-points", scan.beta_points, "Beta grid points (endpoints included)");
  g->add_option("--gamma", scan.gamma, "Shift alpha -> alpha + gamma at every point");
  add_solver_flags(g, scan.solver);
  g->add_option("--seed", scan.seed, "Recorded in the manifest");
  g->add_option("--jobs", scan.jobs, "Worker threads (0 = all cores)");
  g->add_option("--out", scan.out, "Grid path (CSV)");

  McOptions mc;
  auto* m = app.add_subcommand("mc", "Glauber Monte Carlo trials");
  m->add_option("--n", mc.n, "Neurons");
  m->add_option("--alpha", mc.alpha, "Gaussian load; p = round(alpha n)");
  m->add_option("--k", mc.k, "Boolean patterns");
  m->add_option("--beta", mc.beta, "Inverse temperature");
  m->add_option("--sweeps", mc.sweeps, "Sweeps per trial (N attempted flips each)");
  m->add_option("--thermalization", mc.thermalization, "Fraction of sweeps discarded");
  m->add_option("--init", mc.init, "Initial configuration")->check(CLI::IsMember({"aligned", "random", "all-up"}));
  m->add_option("--pattern", mc.pattern, "1-based Boolean pattern for --init aligned");
  m->add_option("--replicas", mc.replicas, "Independent chains on the same disorder; 2 measures q12")->check(CLI::Range(1, 2));
  m->add_option("--rule", mc.rule, "Single-spin update rule")->check(CLI::IsMember({"glauber", "metropolis"}));
  m->add_option("--trials", mc.trials, "Independent trials; trial t uses seed + t");
  m->add_option("--retrieval-low", mc.retrieval_low, "|m1| at or below this is reported as not retrieved");
  m->add_option("--retrieval-high", mc.retrieval_high, "|m1| at or above this is reported as retrieved");
  m->add_option("--seed", mc.seed, "Base seed for patterns and dynamics");
  m->add_option("--jobs", mc.jobs, "Worker threads (0 = all cores)");
  m->add_option("--out", mc.out, "Trial path (CSV)");

  BoundariesOptions bounds;
  auto* b = app.add_subcommand("boundaries", "Second-order, existence and first-order lines");
  b->add_option("--alphas", bounds.alphas, "Alphas for the second-order line")->delimiter(',');
  b->add_option("--betas", bounds.betas, "Betas for the existence and first-order lines")->delimiter(',');
  b->add_option("--beta-width", bounds.beta_width, "Final bisection bracket in beta");
  b->add_option("--alpha-width", bounds.alpha_width, "Final bisection bracket in alpha");
  add_solver_flags(b, bounds.solver);
  b->add_option("--seed", bounds.seed, "Recorded in the manifest");
  b->add_option("--out", bounds.out, "Curve path (JSON)");

  std::string manifest, replay_out;
  auto* r = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  r->add_option("manifest", manifest, "Manifest path")->required();
  r->add_option("--out", replay_out, "Write the data file here instead of the recorded path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (*v) return run_verify_equivalence(verify, std::cout, std::cerr);
  if (*s) return run_solve(solve, std::cout, std::cerr);
  if (*g) return run_scan(scan, std::cout, std::cerr);
  if (*m) return run_mc(mc, std::cout, std::cerr);
  if (*b) return run_boundaries(bounds, std::cout, std::cerr);
  return run_replay(manifest, replay_out, std::cout, std::cerr);
}
