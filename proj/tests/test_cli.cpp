#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modtv_cli/cli.hpp"
#include "modtv_cli/run_record.hpp"

namespace modtv::cli {
namespace {

namespace fs = std::filesystem;

const std::string kBarbell = std::string(MODTV_DATA_DIR) + "/barbell.txt";

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("modtv_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json strip_timing(nlohmann::json j) {
  j.erase("wall_time_ms");
  j.erase("load_time_ms");
  return j;
}

TEST(Cli, PsOnBarbellFindsTriangle) {
  Result r = invoke({"solve", "--graph", kBarbell, "--method", "ps", "--seed", "7"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_NEAR(j["q"].get<double>(), 5.0 / 28.0, 1e-12);
  EXPECT_EQ(j["community_size"], 3);
  EXPECT_DOUBLE_EQ(j["community_fraction"].get<double>(), 0.5);
  EXPECT_EQ(j["n"], 6);
  EXPECT_EQ(j["m"], 7);
  EXPECT_EQ(j["params"]["sigma"], 75.0);
}

TEST(Cli, FastAtvoFromLinearStartDoesNotDecrease) {
  Result lin = invoke({"solve", "--graph", kBarbell, "--method", "linear"});
  ASSERT_EQ(lin.code, kOk) << lin.err;
  EXPECT_TRUE(nlohmann::json::parse(lin.out)["tv_p_init"].is_null());
  Result fa = invoke({"solve", "--graph", kBarbell, "--method", "fastatvo", "--start", "linear"});
  ASSERT_EQ(fa.code, kOk) << fa.err;
  auto j = nlohmann::json::parse(fa.out);
  EXPECT_GE(j["tv_p_final"].get<double>(), j["tv_p_init"].get<double>() - 1e-9);
  EXPECT_LE(j["stationarity"].get<double>(), 1e-4);
}

TEST(Cli, IdenticalInvocationsGiveIdenticalRecords) {
  for (const char* method : {"linear", "fastatvo", "multistart", "ps"}) {
    const std::vector<std::string> args{"solve",  "--graph", kBarbell, "--method",
                                        method,   "--seed",  "3",      "--start",
                                        "random"};
    Result a = invoke(args), b = invoke(args);
    ASSERT_EQ(a.code, kOk) << a.err;
    EXPECT_EQ(strip_timing(nlohmann::json::parse(a.out)),
              strip_timing(nlohmann::json::parse(b.out)))
        << method;
  }
}

TEST(Cli, RecordRoundTripsThroughJson) {
  Result r = invoke({"solve", "--graph", kBarbell, "--method", "fastatvo"});
  ASSERT_EQ(r.code, kOk);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(to_json(record_from_json(j)), j);
}

TEST(Cli, OutputFiles) {
  TempDir dir;
  Result r = invoke({"solve", "--graph", kBarbell, "--method", "ps", "--out", dir.file("r.json"),
                     "--community-out", dir.file("c.txt"), "--community-base", "1", "--csv",
                     dir.file("r.csv")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("Q = 0.1786"), std::string::npos) << r.out;
  auto j = nlohmann::json::parse(slurp(dir.file("r.json")));
  EXPECT_NEAR(j["q"].get<double>(), 5.0 / 28.0, 1e-12);
  const std::string members = slurp(dir.file("c.txt"));
  EXPECT_TRUE(members == "1\n2\n3\n" || members == "4\n5\n6\n") << members;
  const std::string csv = slurp(dir.file("r.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header());
}

TEST(Cli, StartFile) {
  TempDir dir;
  std::ofstream(dir.file("x0.txt")) << "1 1 1 -1 -1 -1\n";
  Result r = invoke({"solve", "--graph", kBarbell, "--start", "file", "--start-file",
                     dir.file("x0.txt")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["iters"], 0);
  std::ofstream(dir.file("short.txt")) << "1 2\n";
  EXPECT_EQ(invoke({"solve", "--graph", kBarbell, "--start", "file", "--start-file",
                    dir.file("short.txt")})
                .code,
            kInput);
}

TEST(Cli, BenchAggregatesMatchRecords) {
  TempDir dir;
  Result r = invoke({"bench", "--graph", kBarbell, "--methods", "linear,fastatvo,ps", "--seeds",
                     "4", "--start", "random", "--csv", dir.file("s.csv")});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["runs"].size(), 12u);
  ASSERT_EQ(j["summary"].size(), 3u);
  for (const auto& cell : j["summary"]) {
    std::vector<double> q;
    for (const auto& run : j["runs"]) {
      if (run["method"] == cell["method"]) q.push_back(run["q"].get<double>());
    }
    ASSERT_EQ(q.size(), 4u);
    double mean = 0.0;
    for (double v : q) mean += v;
    mean /= 4.0;
    double var = 0.0;
    for (double v : q) var += (v - mean) * (v - mean);
    EXPECT_NEAR(cell["q_mean"].get<double>(), mean, 1e-15);
    EXPECT_NEAR(cell["q_std"].get<double>(), std::sqrt(var / 3.0), 1e-15);
    EXPECT_EQ(cell["runs"], 4);
  }
  const std::string csv = slurp(dir.file("s.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Cli, OracleOnBarbell) {
  Result r = invoke({"oracle", "--graph", kBarbell, "--a", "2", "--b", "3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_NEAR(j["max_q"].get<double>(), 5.0 / 28.0, 1e-15);
  EXPECT_TRUE(j["ps_optimal"].get<bool>());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"solve", "--help"}).code, kOk);
  EXPECT_EQ(invoke({}).code, kUsage);
  EXPECT_EQ(invoke({"solve"}).code, kUsage);
  EXPECT_EQ(invoke({"solve", "--graph", kBarbell, "--method", "louvain"}).code, kUsage);
  EXPECT_EQ(invoke({"solve", "--graph", kBarbell, "--bogus"}).code, kUsage);
  EXPECT_EQ(invoke({"solve", "--graph", "/nonexistent/graph.txt"}).code, kInput);

  TempDir dir;
  std::ofstream(dir.file("bad.txt")) << "1 2\n2 three\n";
  Result bad = invoke({"solve", "--graph", dir.file("bad.txt")});
  EXPECT_EQ(bad.code, kInput);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;

  EXPECT_EQ(invoke({"solve", "--graph", kBarbell, "--p", "1"}).code, kInvalid);
  EXPECT_EQ(invoke({"solve", "--graph", kBarbell, "--sigma", "150"}).code, kInvalid);
  EXPECT_EQ(invoke({"solve", "--graph", kBarbell, "--a", "0"}).code, kInvalid);
  EXPECT_EQ(invoke({"solve", "--graph", kBarbell, "--start", "file"}).code, kInvalid);

  // |x_i - x_j|^p overflows, so the solver aborts on a non-finite objective
  EXPECT_EQ(invoke({"solve", "--graph", kBarbell, "--p", "5000", "--start", "random"}).code,
            kSolverAbort);

  std::ofstream big(dir.file("big.txt"));
  for (int i = 1; i < 25; ++i) big << i << ' ' << i + 1 << '\n';
  big.close();
  EXPECT_EQ(invoke({"oracle", "--graph", dir.file("big.txt")}).code, kInvalid);
}

}  // namespace
}  // namespace modtv::cli
