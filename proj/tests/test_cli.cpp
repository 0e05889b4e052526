#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lrp/sweep_row.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(LRP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  Result r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class CliSweep : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lrp_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const nlohmann::json& j) {
    const fs::path p = dir_ / "config.json";
    std::ofstream(p) << j.dump();
    return p;
  }

  fs::path dir_;
};

nlohmann::json s3_config() {
  return {{"schema", 1},
          {"topology", "cycle"},
          {"n_values", {128, 256, 512, 1024}},
          {"s_values", {3.0}},
          {"beta_values", {1.0}},
          {"trials", 5},
          {"master_seed", 11},
          {"metrics", {{"diameter", true}}}};
}

TEST(Cli, SampleWritesEdgeRows) {
  const auto r = run("sample --topology cycle --n 10 --s 3 --beta 0 --seed 1");
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "u,v");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 10);
}

TEST(Cli, StatsPrintsJson) {
  const auto r = run("stats --topology path --n 30 --s 2.5 --beta 1 --seed 4");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["vertices"], 30);
  EXPECT_TRUE(j["diameter"].is_number());
  EXPECT_TRUE(j["num_cut_points"].is_number());
  EXPECT_TRUE(j["half_boundary"].is_null());
  EXPECT_EQ(j["resistance_samples"].size(), 16u);
}

TEST(Cli, OracleSelfTestPasses) {
  const auto r = run("oracle");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
}

TEST(Cli, UsageAndInputErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("sample --n 5").code, 2);
  EXPECT_EQ(run("sample --topology box1 --n 5 --s 1.5").code, 2);
  EXPECT_EQ(run("sweep --config /nonexistent/config.json").code, 2);
  EXPECT_EQ(run("fit --csv /nonexistent/rows.csv").code, 2);
  EXPECT_EQ(run("hierarchy --levels 4,1").code, 2);
}

TEST_F(CliSweep, BadConfigExitsTwo) {
  auto j = s3_config();
  j.erase("schema");
  EXPECT_EQ(run("sweep --config " + write_config(j).string()).code, 2);
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(run("sweep --config " + (dir_ / "broken.json").string()).code, 2);
}

TEST_F(CliSweep, RerunsAndWorkerCountsGiveIdenticalFiles) {
  const auto cfg = write_config(s3_config()).string();
  const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv", c = dir_ / "c.csv";
  ASSERT_EQ(run("sweep --config " + cfg + " --workers 1 --out " + a.string()).code, 0);
  ASSERT_EQ(run("sweep --config " + cfg + " --workers 1 --out " + b.string()).code, 0);
  ASSERT_EQ(run("sweep --config " + cfg + " --workers 4 --out " + c.string()).code, 0);
  const std::string first = slurp(a);
  EXPECT_EQ(first, slurp(b));
  EXPECT_EQ(first, slurp(c));
  std::istringstream in(first);
  EXPECT_EQ(lrp::read_csv(in).size(), 20u);
}

TEST_F(CliSweep, EnvironmentWorkersAndFlagPrecedence) {
  const auto cfg = write_config(s3_config()).string();
  const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv";
  ASSERT_EQ(run("sweep --config " + cfg + " --out " + a.string()).code, 0);
  const std::string env = "LRP_WORKERS=3 ";
  const std::string cmd = env + LRP_CLI_PATH + " sweep --config " + cfg + " --out " +
                          b.string() + " >/dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const std::string bad = "LRP_WORKERS=none " + std::string(LRP_CLI_PATH) +
                          " sweep --config " + cfg + " --out " + b.string() +
                          " >/dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), 2);
  const std::string flag_wins = "LRP_WORKERS=none " + std::string(LRP_CLI_PATH) +
                                " sweep --workers 2 --config " + cfg + " --out " +
                                b.string() + " >/dev/null 2>&1";
  EXPECT_EQ(std::system(flag_wins.c_str()), 0);
}

TEST_F(CliSweep, FitReportsLinearRegime) {
  const auto cfg = write_config(s3_config()).string();
  const fs::path csv = dir_ / "rows.csv";
  ASSERT_EQ(run("sweep --config " + cfg + " --out " + csv.string()).code, 0);
  const auto r = run("fit --csv " + csv.string() + " --column diameter");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  double slope = -1;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string topo, s, beta, model;
    cells >> topo >> s >> beta >> model;
    if (model == "PowerLaw") cells >> slope;
  }
  EXPECT_GE(slope, 0.9);
  EXPECT_LE(slope, 1.05);
  EXPECT_NE(r.out.find("Linear"), std::string::npos);
}

TEST(Cli, HierarchyCensus) {
  const auto r = run("hierarchy --levels 4,4,4 --s 1.5 --beta 4 --trials 50 --lo 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("P(nu) empirical"), std::string::npos);
  EXPECT_NE(r.out.find("diameter bound 16"), std::string::npos);
  const auto e = run("hierarchy --alpha 1.1 --k 2 --s 1.5 --beta 4 --trials 20");
  ASSERT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("N_k=9"), std::string::npos);
}

}  // namespace
