#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace dyndiv::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dyndiv_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    std::ofstream(path("line.txt")) << "0\n4\n6\n7\n";
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = call({"--help"});
  EXPECT_EQ(r.code, exit_code::kOk);
  EXPECT_NE(r.out.find("rel-gmm"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(call({}).code, exit_code::kUsage);
  EXPECT_EQ(call({"select", "--bogus"}).code, exit_code::kUsage);
  EXPECT_EQ(call({"select", "--input", path("line.txt"), "--k", "2", "--b", "1"}).code, exit_code::kUsage);
  EXPECT_EQ(call({"select", "--input", path("line.txt"), "--k", "2", "--method", "nope"}).code, exit_code::kUsage);
  EXPECT_EQ(call({"gen-worstcase-basic", "--eta", "0.9"}).code, exit_code::kUsage);
}

TEST_F(CliTest, DataErrors) {
  EXPECT_EQ(call({"select", "--input", path("missing.txt"), "--k", "2"}).code, exit_code::kData);
  EXPECT_EQ(call({"select", "--input", path("line.txt"), "--k", "9"}).code, exit_code::kData);
  std::ofstream(path("bad.txt")) << "1 2\n3\n";
  const auto r = call({"verify", "--input", path("bad.txt")});
  EXPECT_EQ(r.code, exit_code::kData);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, BuildPrintsSnapshot) {
  const auto r = call({"build", "--input", path("line.txt")});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  EXPECT_EQ(r.out, "2 2 -1 4\n0 2 none none\n1 1 0 2\n2 0 1 1\n3 -1 2 0\n");
}

TEST_F(CliTest, VerifyReportsCleanTree) {
  const auto r = call({"verify", "--input", path("line.txt"), "--b", "1.3"});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  EXPECT_NE(r.out.find("violations 0"), std::string::npos);
}

TEST_F(CliTest, SelectAndOracle) {
  auto r = call({"select", "--input", path("line.txt"), "--k", "2", "--method", "ict-inherit,gmm"});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j.at("method"), "ICTInherit");
  EXPECT_EQ(j.at("diversity"), 4.0);
  std::getline(lines, line);
  EXPECT_EQ(nlohmann::json::parse(line).at("method"), "GMM");

  r = call({"oracle", "--input", path("line.txt"), "--k", "2"});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("d_star"), 7.0);
  EXPECT_EQ(j.at("optimal_set"), nlohmann::json::array({0, 3}));
}

TEST_F(CliTest, GeneratedInstanceFeedsExperiments) {
  ASSERT_EQ(call({"gen-worstcase-inherit", "--output", path("wc.txt")}).code, exit_code::kOk);
  EXPECT_TRUE(fs::exists(path("wc.txt.meta")));
  const auto r = call({"dist", "--input", path("wc.txt"), "--trials", "1", "--method", "ict-inherit",
                       "--output", path("wc.jsonl")});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("wc.jsonl")));
  EXPECT_NEAR(j.at("ratio").get<double>(), 5.8 / 1.1, 1e-9);
  EXPECT_TRUE(fs::exists(path("wc.jsonl.summary.csv")));
}

TEST_F(CliTest, GeneratorFlagRunsExperimentDirectly) {
  const auto r = call({"dist", "--generator", "worstcase-basic", "--trials", "3", "--method", "ict-basic"});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  int lines = 0;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    ++lines;
    EXPECT_LE(nlohmann::json::parse(line).at("ratio").get<double>(), 8.0 + 1e-9);
  }
  EXPECT_EQ(lines, 3);
}

TEST_F(CliTest, DistIsReproducible) {
  const std::vector<std::string> args = {"dist", "--generator", "grid", "--noise", "60", "--trials", "4", "--seed", "9"};
  const auto a = call(args);
  const auto b = call(args);
  ASSERT_EQ(a.code, exit_code::kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST_F(CliTest, RelGmmKRange) {
  const auto r = call({"rel-gmm", "--generator", "grid", "--noise", "100", "--k-range", "2:10:4", "--method", "gmm"});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  std::vector<int> ks;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    ks.push_back(j.at("k").get<int>());
    EXPECT_EQ(j.at("ratio_gmm"), 1.0);
  }
  EXPECT_EQ(ks, (std::vector<int>{2, 6, 10}));
  EXPECT_EQ(call({"rel-gmm", "--input", path("line.txt"), "--k-range", "3:2"}).code, exit_code::kUsage);
}

TEST_F(CliTest, GridRoundTripThroughFile) {
  ASSERT_EQ(call({"gen-grid", "--noise", "20", "--seed", "5", "--output", path("g.txt")}).code, exit_code::kOk);
  const auto r = call({"verify", "--input", path("g.txt")});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  EXPECT_EQ(r.out.rfind("points 29 ", 0), 0u);
}

TEST_F(CliTest, BoundsCsv) {
  const auto r = call({"bounds", "--curve", "alpha", "--samples", "2", "--b-min", "1", "--b-max", "2"});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  EXPECT_EQ(r.out, "b,alpha_basic,alpha_greedy_inherit\n1.5,9,8\n2,8,6\n");
}

TEST_F(CliTest, StreamDemo) {
  const auto r = call({"stream-demo", "--input", path("line.txt"), "--k", "2", "--window", "3"});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  int lines = 0;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 3);
}

TEST_F(CliTest, TimingRecordsWallTime) {
  const auto r = call({"timing", "--generator", "grid", "--noise", "50", "--k", "4"});
  ASSERT_EQ(r.code, exit_code::kOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_TRUE(nlohmann::json::parse(line).contains("wall_ms"));
}

}  // namespace
}  // namespace dyndiv::cli
