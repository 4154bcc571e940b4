#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhn/montecarlo.hpp"
#include "mhn/patterns.hpp"
#include "mhn/phase_diagram.hpp"
#include "mhn/rs_solver.hpp"

namespace mhn::cli {

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

// Thrown for any failure to create, write or read a file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (n, k, p, seed) only; load() regenerates the matrices from the seed.
nlohmann::json pattern_snapshot(const PatternSet& patterns);
PatternSet load_pattern_snapshot(const nlohmann::json& j);

nlohmann::json solution_record(const RSSolution& s, double alpha, double beta, double gamma,
                               const SolverSettings& settings);
nlohmann::json branch_set_record(const BranchSet& set, double alpha, double beta, double gamma,
                                 const SolverSettings& settings);
nlohmann::json boundary_record(const BoundaryCurve& curve);

inline constexpr const char* kGridSchema = "mhn.grid.v1";
inline constexpr const char* kMcSchema = "mhn.mc.v1";

void write_grid_csv(std::ostream& os, const std::vector<PhasePoint>& points);

struct McRow {
  std::uint64_t seed = 0;
  McConfig cfg;
  McResult result;
};
void write_mc_csv(std::ostream& os, const std::vector<McRow>& rows);

// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace mhn::cli
