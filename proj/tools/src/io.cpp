#include "mhn_cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace mhn::cli {

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

nlohmann::json pattern_snapshot(const PatternSet& patterns) {
  return {{"n", patterns.n()}, {"k", patterns.k()}, {"p", patterns.p()}, {"seed", patterns.seed()}};
}

PatternSet load_pattern_snapshot(const nlohmann::json& j) {
  return PatternSet::generate(j.at("n").get<std::size_t>(), j.at("k").get<std::size_t>(),
                              j.at("p").get<std::size_t>(), j.at("seed").get<std::uint64_t>());
}

nlohmann::json solution_record(const RSSolution& s, double alpha, double beta, double gamma,
                               const SolverSettings& settings) {
  nlohmann::json j{{"alpha", alpha},
                   {"beta", beta},
                   {"gamma", gamma},
                   {"m", s.params.m},
                   {"q", s.params.q},
                   {"p_bar", s.params.p_bar},
                   {"free_energy", s.free_energy},
                   {"branch", std::string(to_string(s.branch))},
                   {"converged", s.converged},
                   {"iterations", s.iterations},
                   {"residual", s.residual},
                   {"nodes", settings.quadrature_nodes}};
  if (!s.diagnostic.empty()) j["diagnostic"] = s.diagnostic;
  return j;
}

nlohmann::json branch_set_record(const BranchSet& set, double alpha, double beta, double gamma,
                                 const SolverSettings& settings) {
  nlohmann::json j;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["gamma"] = gamma;
  j["alpha_effective"] = alpha + gamma;
  j["ordering"] = std::string(kOrderingConvention);
  j["branches"] = nlohmann::json::array();
  for (const auto& s : set.branches) j["branches"].push_back(solution_record(s, alpha, beta, gamma, settings));
  j["failures"] = nlohmann::json::array();
  for (const auto& s : set.failures) j["failures"].push_back(solution_record(s, alpha, beta, gamma, settings));
  if (beta >= 50.0) j["warning"] = "finite beta used as a proxy for T -> 0";
  return j;
}

nlohmann::json boundary_record(const BoundaryCurve& curve) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [a, b] : curve.points) pts.push_back({{"alpha", a}, {"beta", b}});
  return {{"kind", std::string(to_string(curve.kind))}, {"tolerance", curve.tolerance}, {"points", pts}};
}

namespace {

std::string cell(double x) { return format_double(x); }

}  // namespace

void write_grid_csv(std::ostream& os, const std::vector<PhasePoint>& points) {
  os << "alpha,beta,gamma,phase,m,q,p_bar,A_retrieval,A_spinglass,ordering,error\n";
  const double nan = std::nan("");
  for (const auto& pt : points) {
    const RSSolution* best = pt.branches.branches.empty() ? nullptr : &pt.branches.branches.front();
    const RSSolution* ret = pt.branches.find(Branch::kRetrieval);
    const RSSolution* sg = pt.branches.find(Branch::kSpinGlass);
    os << cell(pt.alpha) << ',' << cell(pt.beta) << ',' << cell(pt.gamma) << ','
       << (pt.error.empty() ? std::string(to_string(pt.phase)) : std::string("error")) << ','
       << cell(best ? best->params.m : nan) << ',' << cell(best ? best->params.q : nan) << ','
       << cell(best ? best->params.p_bar : nan) << ',' << cell(ret ? ret->free_energy : nan) << ','
       << cell(sg ? sg->free_energy : nan) << ',' << kOrderingConvention << ',';
    // Errors are free text; keep the row well-formed.
    std::string e = pt.error;
    for (char& c : e) {
      if (c == ',' || c == '\n' || c == '"') c = ' ';
    }
    os << e << '\n';
  }
}

void write_mc_csv(std::ostream& os, const std::vector<McRow>& rows) {
  os << "seed,n,k,alpha,beta,sweeps,m1_mean,m1_err,q12_mean,q12_err,energy_mean\n";
  const double nan = std::nan("");
  for (const auto& r : rows) {
    const Estimate m1 = r.result.mattis.empty() ? Estimate{nan, nan} : r.result.mattis.front();
    const Estimate q = r.result.q12.value_or(Estimate{nan, nan});
    os << r.seed << ',' << r.cfg.n << ',' << r.cfg.k << ',' << cell(r.cfg.alpha) << ',' << cell(r.cfg.beta) << ','
       << r.cfg.sweeps << ',' << cell(m1.mean) << ',' << cell(m1.error) << ',' << cell(q.mean) << ','
       << cell(q.error) << ',' << cell(r.result.energy.mean) << '\n';
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace mhn::cli
