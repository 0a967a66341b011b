// Copyright 2026 The kpgrad Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kpgrad/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "kpgrad/instance.h"

namespace kpgrad::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kpgrad_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("KP_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("KP_SEED");
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  std::string WriteThreeItems() const {
    const std::string path = Path("three.csv");
    write_instance(KnapsackInstance({6, 10, 12}, {1, 2, 3}, 5), fs::path(path));
    return path;
  }
  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, NoArgumentsIsUsageError) {
  EXPECT_EQ(Invoke({}).code, kUsageError);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kUsageError);
  EXPECT_EQ(Invoke({"--help"}).code, kOk);
}

TEST_F(CliTest, GenerateWritesInstance) {
  const std::string path = Path("a.csv");
  const Result r = Invoke({"generate", "--family", "strongly-correlated", "--n",
                        "1000", "--R", "1000", "--seed", "7", "--out", path});
  ASSERT_EQ(r.code, kOk) << r.err;
  const KnapsackInstance instance = read_instance(fs::path(path));
  EXPECT_EQ(instance.size(), 1000u);
  const json report = r.report();
  EXPECT_EQ(report["instance"]["budget"].get<double>(), instance.budget());
  EXPECT_EQ(report["total_cost"].get<double>(), instance.total_cost());
  GeneratorSpec spec;
  spec.family = Family::kStronglyCorrelated;
  spec.n = 1000;
  spec.seed = 7;
  EXPECT_EQ(instance, generate(spec));
}

TEST_F(CliTest, GenerateSpannerVariant) {
  const std::string path = Path("s.csv");
  const Result r = Invoke({"generate", "--family", "uncorrelated", "--spanner",
                        "2,10", "--n", "500", "--out", path});
  ASSERT_EQ(r.code, kOk) << r.err;
  const KnapsackInstance instance = read_instance(fs::path(path));
  std::set<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    pairs.emplace(instance.value(i), instance.cost(i));
  }
  EXPECT_LE(pairs.size(), 20u);
  EXPECT_EQ(r.report()["instance"]["spanner"], json::array({2, 10}));
}

TEST_F(CliTest, GenerateUsageErrors) {
  EXPECT_EQ(Invoke({"generate", "--out", Path("x.csv")}).code, kUsageError);
  EXPECT_EQ(Invoke({"generate", "--n", "10"}).code, kUsageError);
  EXPECT_EQ(Invoke({"generate", "--n", "10", "--family", "nope", "--out",
                 Path("x.csv")}).code,
            kUsageError);
  EXPECT_EQ(Invoke({"generate", "--n", "10", "--spanner", "2", "--out",
                 Path("x.csv")}).code,
            kUsageError);
  EXPECT_EQ(Invoke({"generate", "--n", "10", "--R", "5", "--out", Path("x.csv")}).code,
            kUsageError);
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  const std::string a = Path("a.csv"), b = Path("b.csv"), c = Path("c.csv");
  ASSERT_EQ(Invoke({"generate", "--n", "50", "--seed", "12", "--out", a}).code, kOk);
  setenv("KP_SEED", "12", 1);
  ASSERT_EQ(Invoke({"generate", "--n", "50", "--out", b}).code, kOk);
  EXPECT_EQ(Slurp(a), Slurp(b));
  unsetenv("KP_SEED");
  ASSERT_EQ(Invoke({"generate", "--n", "50", "--out", c}).code, kOk);
  EXPECT_NE(Slurp(a), Slurp(c));
  setenv("KP_SEED", "twelve", 1);
  EXPECT_EQ(Invoke({"generate", "--n", "50", "--out", c}).code, kUsageError);
}

TEST_F(CliTest, SolveThreeItems) {
  const Result r = Invoke({"solve", "--instance", WriteThreeItems()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = r.report();
  EXPECT_EQ(report["objective"].get<double>(), 22.0);
  EXPECT_EQ(report["cost"].get<double>(), 5.0);
  EXPECT_TRUE(report["feasible"].get<bool>());
  EXPECT_EQ(report["method"], "gradient-ste");
  EXPECT_EQ(report["ratio_to_optimum"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(report["ratio_to_bound"].get<double>(), 22.0 / 24.0);
  EXPECT_GT(report["epochs"].get<int>(), 0);
  EXPECT_TRUE(report["wall_time_s"].is_number());
}

TEST_F(CliTest, SolveReportKeysInOrder) {
  const Result r = Invoke({"solve", "--instance", WriteThreeItems(),
                           "--estimator", "pte", "--no-timing"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::size_t previous = 0;
  for (const char* key : {"instance", "method", "objective", "cost", "feasible",
                          "ratio_to_bound", "ratio_to_optimum", "epochs",
                          "steps", "wall_time_s"}) {
    const std::size_t at = r.out.find("\"" + std::string(key) + "\":");
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_GE(at, previous) << key;
    previous = at;
  }
  EXPECT_EQ(r.report()["method"], "gradient-pte");
  EXPECT_TRUE(r.report()["wall_time_s"].is_null());
}

TEST_F(CliTest, SolveWritesTrace) {
  const std::string trace = Path("trace.jsonl");
  const Result r = Invoke({"solve", "--instance", WriteThreeItems(), "--trace", trace});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::ifstream in(trace);
  std::string line;
  std::int64_t lines = 0;
  while (std::getline(in, line)) {
    const json entry = json::parse(line);
    EXPECT_EQ(entry["epoch"].get<std::int64_t>(), lines);
    EXPECT_TRUE(entry.contains("beta") && entry.contains("tau"));
    ++lines;
  }
  EXPECT_EQ(lines, r.report()["epochs"].get<std::int64_t>());
}

TEST_F(CliTest, SolveGeneratedInstance) {
  const Result r = Invoke({"solve", "--family", "weakly-correlated", "--n", "200",
                        "--seed", "3", "--gamma", "0.2", "--xi", "0.5",
                        "--patience", "20", "--init", "gaussian:0.1"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = r.report();
  EXPECT_EQ(report["instance"]["family"], "weakly-correlated");
  EXPECT_EQ(report["instance"]["n"], 200);
  EXPECT_LE(report["cost"].get<double>(), report["instance"]["budget"].get<double>());
  EXPECT_GE(report["ratio_to_optimum"].get<double>(), 0.9);
}

TEST_F(CliTest, SolveErrors) {
  const Result missing = Invoke({"solve", "--instance", Path("missing.csv")});
  EXPECT_EQ(missing.code, kRuntimeError);
  EXPECT_NE(missing.err.find("missing.csv"), std::string::npos);
  EXPECT_EQ(Invoke({"solve"}).code, kUsageError);
  EXPECT_EQ(Invoke({"solve", "--instance", WriteThreeItems(), "--n", "5"}).code,
            kUsageError);
  EXPECT_EQ(Invoke({"solve", "--n", "5", "--estimator", "xyz"}).code, kUsageError);
  EXPECT_EQ(Invoke({"solve", "--n", "5", "--gamma", "-1"}).code, kUsageError);
  EXPECT_EQ(Invoke({"solve", "--n", "5", "--xi", "0"}).code, kUsageError);
  EXPECT_EQ(Invoke({"solve", "--n", "5", "--init", "uniform"}).code, kUsageError);
  std::ofstream(Path("bad.csv")) << "n,2,budget,5\n1,6,1\n2,-1,2\n";
  const Result bad = Invoke({"solve", "--instance", Path("bad.csv")});
  EXPECT_EQ(bad.code, kRuntimeError);
  EXPECT_NE(bad.err.find("line 3"), std::string::npos) << bad.err;
}

TEST_F(CliTest, VerifyAllFamilies) {
  const Result r = Invoke({"verify", "--n", "100", "--count", "20", "--no-timing"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = r.report();
  ASSERT_EQ(report["families"].size(), 6u);
  for (const json& family : report["families"]) {
    EXPECT_EQ(family["runs"], 20);
    EXPECT_EQ(family["feasible"], 20);
    EXPECT_GE(family["solver_ratio"]["mean"].get<double>(), 0.98);
    EXPECT_LE(family["solver_ratio"]["min"].get<double>(), 1.0);
    EXPECT_TRUE(family["brute_force_mismatches"].is_null());
  }
  EXPECT_TRUE(report["all_feasible"].get<bool>());
  EXPECT_TRUE(report["passed"].get<bool>());
}

TEST_F(CliTest, VerifyBruteForceCrossCheck) {
  const Result r = Invoke({"verify", "--n", "30", "--count", "1", "--brute-force",
                        "--family", "uncorrelated", "--family",
                        "strongly-correlated", "--no-timing"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = r.report();
  ASSERT_EQ(report["families"].size(), 2u);
  for (const json& family : report["families"]) {
    EXPECT_EQ(family["brute_force_mismatches"], 0);
  }
}

TEST_F(CliTest, VerifyUsageErrors) {
  EXPECT_EQ(Invoke({"verify", "--count", "0"}).code, kUsageError);
  EXPECT_EQ(Invoke({"verify", "--n", "31", "--brute-force"}).code, kUsageError);
  EXPECT_EQ(Invoke({"verify", "--family", "bogus"}).code, kUsageError);
}

TEST_F(CliTest, VerifyIsIndependentOfJobCount) {
  const std::vector<std::string> base = {"verify", "--n", "60", "--count", "4",
                                         "--no-timing"};
  std::vector<std::string> one = base, three = base;
  one.insert(one.end(), {"--jobs", "1"});
  three.insert(three.end(), {"--jobs", "3"});
  EXPECT_EQ(Invoke(one).out, Invoke(three).out);
}

TEST_F(CliTest, BenchRepeatsAreIdentical) {
  const Result r = Invoke({"bench", "--n", "1000", "--repeat", "3", "--seed", "5",
                        "--family", "uncorrelated", "--json", "-"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = r.report();
  ASSERT_EQ(report["runs"].size(), 3u);
  const double objective = report["runs"][0]["objective"].get<double>();
  for (const json& run : report["runs"]) {
    EXPECT_EQ(run["objective"].get<double>(), objective);
    EXPECT_TRUE(run["feasible"].get<bool>());
    EXPECT_GE(run["ratio_to_bound"].get<double>(), 0.99);
    EXPECT_LE(run["ratio_to_bound"].get<double>(), 1.0);
  }
}

TEST_F(CliTest, BenchDefaultsToAllFamilies) {
  const std::string json_path = Path("bench.json");
  const Result r = Invoke({"bench", "--n", "200", "--json", json_path});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = json::parse(Slurp(json_path));
  ASSERT_EQ(report["runs"].size(), 6u);
  std::set<std::string> families;
  for (const json& run : report["runs"]) {
    std::string name = run["instance"]["family"];
    if (!run["instance"]["spanner"].is_null()) name += "-span";
    families.insert(name);
  }
  EXPECT_EQ(families.size(), 6u);
  // Text table: header plus one row per run.
  std::istringstream table(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(table, line)) ++rows;
  EXPECT_EQ(rows, 7);
  EXPECT_NE(r.out.find("Time (s)"), std::string::npos);
}

TEST_F(CliTest, ReportsAreByteIdenticalWithoutTiming) {
  const std::vector<std::string> solve = {"solve", "--n", "300", "--seed", "4",
                                          "--family", "inverse-strongly-correlated",
                                          "--no-timing", "--trace"};
  std::vector<std::string> a = solve, b = solve;
  a.push_back(Path("a.jsonl"));
  b.push_back(Path("b.jsonl"));
  const Result ra = Invoke(a), rb = Invoke(b);
  ASSERT_EQ(ra.code, kOk) << ra.err;
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(Slurp(Path("a.jsonl")), Slurp(Path("b.jsonl")));
  EXPECT_FALSE(Slurp(Path("a.jsonl")).empty());
}

TEST(RunReportTest, JsonShape) {
  RunReport report;
  report.instance.family = "uncorrelated";
  report.instance.n = 10;
  report.instance.budget = 20;
  report.method = "greedy";
  report.objective = 5;
  const nlohmann::ordered_json j = to_json(report);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{
                      "instance", "method", "objective", "cost", "feasible",
                      "ratio_to_bound", "ratio_to_optimum", "epochs", "steps",
                      "wall_time_s"}));
  EXPECT_TRUE(j["ratio_to_optimum"].is_null());
  EXPECT_EQ(j["instance"]["family"], "uncorrelated");
}

}  // namespace
}  // namespace kpgrad::cli
