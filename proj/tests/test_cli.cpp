#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "salscp/factor_io.hpp"
#include "salscp/trace.hpp"

using namespace salscp;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("salscp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + SALSCP_CLI_PATH + "\" " + args + " > \"" + (dir_ / "stdout.txt").string() +
                            "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  std::string path(const std::string& name) const { return "\"" + (dir_ / name).string() + "\""; }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

const std::string kData = std::string(SALSCP_TEST_DATA_DIR) + "/small.coo";

}  // namespace

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_NE(read("stdout.txt").find("decompose"), std::string::npos);
  EXPECT_EQ(run("sals --help"), 0);
}

TEST_F(Cli, DecomposeWritesFactorsAndTrace) {
  ASSERT_EQ(run("decompose --input \"" + kData + "\" --rank 2 --sweeps 7 --tol 0 --out " + path("f") + " --trace " +
                path("t.csv") + " --no-wall-time"),
            0);
  const auto trace = read_trace_csv(dir_ / "t.csv");
  ASSERT_EQ(trace.size(), 7u);
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i].sampled_objective, trace[i - 1].sampled_objective);
  for (const auto& row : trace) EXPECT_EQ(row.wall_ns, 0);
  const KruskalModel m = read_factors(dir_ / "f");
  EXPECT_EQ(m.rank(), 2u);
  EXPECT_EQ(m.shape(), (Shape{2, 3, 2}));
}

TEST_F(Cli, SalsRunsFromSourceConfig) {
  write("src.json", R"({"kind": "sparse_random", "shape": [5, 6, 7], "gamma": 0.3, "seed": 2})");
  ASSERT_EQ(run("sals --source " + path("src.json") + " --rank 2 --blocks 6 --batch 2 --step const:0.5 --check-bounds "
                "--gradient --no-wall-time --trace " + path("a.csv")),
            0);
  ASSERT_EQ(run("sals --source " + path("src.json") + " --rank 2 --blocks 6 --batch 2 --step const:0.5 --check-bounds "
                "--gradient --no-wall-time --trace " + path("b.csv")),
            0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  const auto trace = read_trace_csv(dir_ / "a.csv");
  ASSERT_EQ(trace.size(), 6u);
  EXPECT_EQ(trace.back().cumulative_samples, 12u);
  EXPECT_TRUE(trace.back().grad_norm.has_value());
  EXPECT_EQ(trace.back().alpha, 0.5);
}

TEST_F(Cli, ExperimentWritesCsvs) {
  write("cfg.json", R"({"experiment": "sparsity", "source": {"kind": "sparse_random", "shape": [4, 5, 6]},
                        "solver": {"batch_sizes": [1, 4]}, "replicates": 2})");
  ASSERT_EQ(run("experiment sparsity --config " + path("cfg.json") + " --out " + path("out")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "sparsity.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "sparsity_fit.csv"));
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("decompose --rank 2"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("decompose --input \"" + kData + "\" --rank 0"), 1);
  write("bad.coo", "3 2 2\n");
  EXPECT_EQ(run("decompose --input " + path("bad.coo") + " --rank 1"), 1);
  write("src.json", R"({"kind": "sparse_random", "shape": [5, 6, 7]})");
  EXPECT_EQ(run("sals --source " + path("src.json") + " --rank 2 --step const:1.5"), 1);
  EXPECT_EQ(run("sals --source " + path("src.json") + " --rank 2 --step sometimes"), 1);
  write("cfg.json", R"({"experiment": "efficiency", "budget": 10, "solver": {"batch_sizes": [3]}})");
  EXPECT_EQ(run("experiment efficiency --config " + path("cfg.json")), 1);
  EXPECT_FALSE(read("stderr.txt").empty());
}

TEST_F(Cli, NumericalFailureExitsTwo) {
  write("big.coo", "3 2 2 2 2\n0 0 0 1e300\n1 1 1 -1e300\n");
  EXPECT_EQ(run("decompose --input " + path("big.coo") + " --rank 2"), 2);
  EXPECT_NE(read("stderr.txt").find("non-finite"), std::string::npos);
}
