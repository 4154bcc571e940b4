#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "mhn_cli/commands.hpp"
#include "mhn_cli/io.hpp"
#include "mhn_cli/manifest.hpp"

namespace fs = std::filesystem;
using namespace mhn;
using namespace mhn::cli;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mhn_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static nlohmann::json load(const std::string& p) { return nlohmann::json::parse(read_file(p)); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

int run_binary(const std::string& args) {
  const int status = std::system((std::string(MHN_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json without_inputs(nlohmann::json branches) {
  for (auto& b : branches) {
    b.erase("alpha");
    b.erase("gamma");
  }
  return branches;
}

}  // namespace

TEST(Format, RoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    const std::string s = format_double(x);
    double y = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), y);
    ASSERT_EQ(x, y) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(5.0), "5");
}

TEST(Snapshot, RegeneratesPatterns) {
  const auto ps = PatternSet::generate(37, 2, 5, 99);
  const auto j = pattern_snapshot(ps);
  EXPECT_EQ(j.size(), 4u);
  EXPECT_EQ(load_pattern_snapshot(nlohmann::json::parse(j.dump())), ps);
}

TEST(Manifest, JsonRoundTrip) {
  RunManifest m{"solve", {{"alpha", 0.1}}, 42, tool_version(), utc_timestamp(), {"a.json"}};
  const auto back = manifest_from_json(to_json(m));
  EXPECT_EQ(back.command, "solve");
  EXPECT_EQ(back.seed, 42u);
  EXPECT_EQ(back.full_config, m.full_config);
  EXPECT_EQ(back.output_paths, m.output_paths);
  EXPECT_EQ(back.timestamp.size(), 20u);  // YYYY-MM-DDTHH:MM:SSZ
  auto j = to_json(m);
  j["schema"] = "other";
  EXPECT_THROW(manifest_from_json(j), std::invalid_argument);
}

TEST_F(CliTest, VerifyEquivalencePasses) {
  VerifyOptions o;
  o.out = path("v.json");
  EXPECT_EQ(run_verify_equivalence(o, out_, err_), kOk) << err_.str();
  const auto j = load(o.out);
  EXPECT_LT(j["max_rel_discrepancy"].get<double>(), 1e-8);
  EXPECT_EQ(j["records"].size(), 20u);
  EXPECT_TRUE(fs::exists(o.out + ".manifest.json"));
}

TEST_F(CliTest, VerifyEquivalenceSizeGuard) {
  VerifyOptions o;
  o.n = 30;
  o.out = path("v.json");
  EXPECT_EQ(run_verify_equivalence(o, out_, err_), kUsage);
  EXPECT_NE(err_.str().find("n = 30"), std::string::npos);
}

TEST_F(CliTest, VerifyEquivalenceNoHiddenUnits) {
  VerifyOptions o;
  o.p = 0;
  o.k = 1;
  o.out = path("v.json");
  ASSERT_EQ(run_verify_equivalence(o, out_, err_), kOk);
  EXPECT_EQ(load(o.out)["max_abs_discrepancy"].get<double>(), 0.0);
}

TEST_F(CliTest, SolveCurieWeiss) {
  SolveOptions o;
  o.alpha = 0.0;
  o.beta = 2.0;
  o.out = path("s.json");
  ASSERT_EQ(run_solve(o, out_, err_), kOk);
  const auto j = load(o.out);
  EXPECT_EQ(j["ordering"], "larger_A_preferred");
  bool found = false;
  for (const auto& b : j["branches"]) {
    if (b["branch"] == "retrieval") {
      EXPECT_NEAR(b["m"].get<double>(), 0.9575040240772688, 1e-10);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(nlohmann::json::parse(out_.str()), j);
}

TEST_F(CliTest, SolveListsTwoBranches) {
  SolveOptions o;
  o.alpha = 0.05;
  o.beta = 5.0;
  o.out = path("s.json");
  ASSERT_EQ(run_solve(o, out_, err_), kOk);
  const auto j = load(o.out);
  ASSERT_EQ(j["branches"].size(), 2u);
  for (const auto& b : j["branches"]) EXPECT_TRUE(b["free_energy"].is_number());
}

TEST_F(CliTest, SolveShiftMatchesUnshifted) {
  SolveOptions a, b;
  a.alpha = 0.03;
  a.gamma = 0.02;
  a.beta = 5.0;
  a.out = path("a.json");
  b.alpha = 0.05;
  b.beta = 5.0;
  b.out = path("b.json");
  ASSERT_EQ(run_solve(a, out_, err_), kOk);
  ASSERT_EQ(run_solve(b, out_, err_), kOk);
  const auto ja = load(a.out), jb = load(b.out);
  EXPECT_EQ(ja["alpha_effective"], jb["alpha_effective"]);
  EXPECT_EQ(without_inputs(ja["branches"]), without_inputs(jb["branches"]));
}

TEST_F(CliTest, SolveWarnsAtProxyTemperature) {
  SolveOptions o;
  o.alpha = 0.05;
  o.beta = 50.0;
  o.out = path("s.json");
  ASSERT_EQ(run_solve(o, out_, err_), kOk);
  EXPECT_TRUE(load(o.out).contains("warning"));
}

TEST_F(CliTest, SolveBadScheme) {
  SolveOptions o;
  o.solver.scheme = "simpson";
  o.out = path("s.json");
  EXPECT_EQ(run_solve(o, out_, err_), kUsage);
}

TEST_F(CliTest, ScanWritesGridAndReplays) {
  ScanOptions o;
  o.out = path("grid/scan.csv");
  o.jobs = 2;
  ASSERT_EQ(run_scan(o, out_, err_), kOk) << err_.str();
  const std::string csv = read_file(o.out);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 401);
  EXPECT_EQ(csv.rfind("alpha,beta,gamma,phase,m,q,p_bar,A_retrieval,A_spinglass", 0), 0u);
  const auto manifest = read_manifest(o.out + ".manifest.json");
  EXPECT_EQ(manifest.command, "scan");
  EXPECT_EQ(manifest.output_paths.at(0), o.out);

  const std::string again = path("grid/replayed.csv");
  ASSERT_EQ(run_replay(o.out + ".manifest.json", again, out_, err_), kOk);
  EXPECT_EQ(read_file(again), csv);
}

TEST_F(CliTest, ScanUnwritablePath) {
  ScanOptions o;
  o.alpha_points = o.beta_points = 2;
  const std::string blocker = path("file");
  write_file(blocker, "x");
  o.out = blocker + "/scan.csv";
  EXPECT_EQ(run_scan(o, out_, err_), kIo);
  EXPECT_NE(err_.str().find("error"), std::string::npos);
}

TEST_F(CliTest, McRetrievalAndDeterminism) {
  McOptions o;
  o.out = path("mc.csv");
  ASSERT_EQ(run_mc(o, out_, err_), kOk) << err_.str();
  const std::string first = read_file(o.out);
  EXPECT_EQ(first.rfind("seed,n,k,alpha,beta,sweeps,m1_mean,m1_err,q12_mean,q12_err,energy_mean\n", 0), 0u);
  const std::string row = first.substr(first.find('\n') + 1);
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 11u);
  EXPECT_GT(std::stod(cells[6]), 0.8);
  EXPECT_NE(out_.str().find("(retrieved)"), std::string::npos) << out_.str();
  const auto manifest = nlohmann::json::parse(read_file(o.out + ".manifest.json"));
  EXPECT_EQ(manifest["full_config"]["retrieval_low"], 0.2);
  EXPECT_EQ(manifest["full_config"]["retrieval_high"], 0.8);

  ASSERT_EQ(run_mc(o, out_, err_), kOk);
  EXPECT_EQ(read_file(o.out), first);
  ASSERT_EQ(run_replay(o.out + ".manifest.json", path("mc2.csv"), out_, err_), kOk);
  EXPECT_EQ(read_file(path("mc2.csv")), first);
}

TEST_F(CliTest, McHotAndParallelTrials) {
  McOptions o;
  o.beta = 0.01;
  o.sweeps = 100;
  o.trials = 3;
  o.replicas = 2;
  o.jobs = 3;
  o.out = path("hot.csv");
  ASSERT_EQ(run_mc(o, out_, err_), kOk);
  const std::string parallel = read_file(o.out);
  o.jobs = 1;
  ASSERT_EQ(run_mc(o, out_, err_), kOk);
  EXPECT_EQ(read_file(o.out), parallel);
  std::stringstream ss(parallel);
  std::string line;
  std::getline(ss, line);
  int rows = 0;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    EXPECT_LT(std::stod(cells[6]), 0.05);
    EXPECT_LT(std::abs(std::stod(cells[8])), 0.05);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST_F(CliTest, McBadInit) {
  McOptions o;
  o.init = "sideways";
  o.out = path("mc.csv");
  EXPECT_EQ(run_mc(o, out_, err_), kUsage);
}

TEST_F(CliTest, BoundariesAndReplay) {
  BoundariesOptions o;
  o.alphas = {0.1};
  o.betas = {50.0};
  o.out = path("b.json");
  ASSERT_EQ(run_boundaries(o, out_, err_), kOk) << err_.str();
  const auto j = load(o.out);
  ASSERT_EQ(j["curves"].size(), 3u);
  EXPECT_EQ(j["curves"][1]["kind"], "retrieval_existence");
  EXPECT_NEAR(j["curves"][1]["points"][0]["alpha"].get<double>(), 0.138, 0.005);
  EXPECT_TRUE(j.contains("warning"));
  ASSERT_EQ(run_replay(o.out + ".manifest.json", path("b2.json"), out_, err_), kOk);
  EXPECT_EQ(read_file(path("b2.json")), read_file(o.out));
}

TEST_F(CliTest, BoundariesBelowCriticalTemperatureIsUsageError) {
  BoundariesOptions o;
  o.alphas = {0.1};
  o.betas = {0.9};
  o.out = path("b.json");
  EXPECT_EQ(run_boundaries(o, out_, err_), kUsage);
}

TEST_F(CliTest, ReplayMissingManifest) { EXPECT_EQ(run_replay(path("nope.json"), "", out_, err_), kIo); }

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  ::setenv("MHN_OUTPUT_DIR", dir_.c_str(), 1);
  SolveOptions o;
  o.beta = 0.5;
  const int rc = run_solve(o, out_, err_);
  ::unsetenv("MHN_OUTPUT_DIR");
  ASSERT_EQ(rc, kOk);
  EXPECT_TRUE(fs::exists(dir_ / "solve.json"));
  EXPECT_TRUE(fs::exists(dir_ / "solve.json.manifest.json"));
}

TEST_F(CliTest, BinaryExitCodes) {
  EXPECT_EQ(run_binary("--version"), 0);
  EXPECT_EQ(run_binary("verify-equivalence --n 30 --out " + path("v.json")), 1);
  EXPECT_EQ(run_binary("solve --beta 2"), 1);  // --alpha is required
  EXPECT_EQ(run_binary("frobnicate"), 1);
  EXPECT_EQ(run_binary("solve --alpha 0 --beta 2 --out " + path("s.json")), 0);
  EXPECT_EQ(run_binary("verify-equivalence --n 5 --p 2 --trials 3 --nodes 16 --threshold 1e-300 --out " +
                       path("strict.json")),
            2);
}

TEST_F(CliTest, BinaryConfigFile) {
  write_file(path("run.ini"), "[solve]\nalpha = 0.05\nbeta = 5\n");
  ASSERT_EQ(run_binary("--config " + path("run.ini") + " solve --out " + path("c.json")), 0);
  const auto j = load(path("c.json"));
  EXPECT_EQ(j["alpha"].get<double>(), 0.05);
  EXPECT_EQ(j["branches"].size(), 2u);
  // Flags override the file.
  ASSERT_EQ(run_binary("--config " + path("run.ini") + " solve --beta 0.5 --out " + path("d.json")), 0);
  EXPECT_EQ(load(path("d.json"))["beta"].get<double>(), 0.5);
}
