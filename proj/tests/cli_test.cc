// Copyright 2026 The DP Trade-off Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "dptradeoff/oracle.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace dptradeoff::cli {
namespace {

using ::testing::DoubleNear;
using ::testing::HasSubstr;

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dptradeoff_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv(kConfigEnvVar);
  }
  void TearDown() override { unsetenv(kConfigEnvVar); }

  std::string Write(const std::string& name, const std::string& contents) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << contents;
    return path.string();
  }

  // A small config so that runs take well under a second.
  std::string SmallConfig(int num_steps = 2) {
    return Write("config.json", nlohmann::json{
        {"loop", {{"num_steps", num_steps},
                  {"num_seeds", 2},
                  {"front_particles", 200},
                  {"pref_particles", 200}}},
        {"acquisition", {{"num_sims", 32},
                         {"num_curve_candidates", 8},
                         {"num_p_candidates", 9}}}}.dump());
  }

  static nlohmann::json ReadJson(const std::string& path) {
    std::ifstream in(path);
    return nlohmann::json::parse(in);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, SimulateWritesAReproducibleRecord) {
  SimulateOptions options;
  options.config_path = SmallConfig();
  options.seed = 4;
  options.out = (dir_ / "a.json").string();
  ASSERT_EQ(Simulate(options, out_, err_), kExitOk) << err_.str();
  EXPECT_THAT(out_.str(), HasSubstr("final regret"));
  options.out = (dir_ / "b.json").string();
  ASSERT_EQ(Simulate(options, out_, err_), kExitOk) << err_.str();
  nlohmann::json a = ReadJson((dir_ / "a.json").string());
  nlohmann::json b = ReadJson((dir_ / "b.json").string());
  EXPECT_EQ(a.at("seed"), 4);
  EXPECT_EQ(a.at("metric_trace").size(), 2);
  a.erase("created_at");
  b.erase("created_at");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(CliTest, SimulateRejectsBadConfigs) {
  SimulateOptions options;
  options.config_path = Write("bad.json", R"({"loop": {"num_steps": 0}})");
  options.out = (dir_ / "x.json").string();
  EXPECT_EQ(Simulate(options, out_, err_), kExitUsage);
  EXPECT_THAT(err_.str(), HasSubstr("loop.num_steps"));
  options.config_path = (dir_ / "missing.json").string();
  EXPECT_EQ(Simulate(options, out_, err_), kExitUsage);
  options.config_path = SmallConfig();
  options.arms = "nonsense";
  EXPECT_EQ(Simulate(options, out_, err_), kExitUsage);
  EXPECT_FALSE(fs::exists(dir_ / "x.json"));
}

TEST_F(CliTest, ConfigComesFromTheEnvironmentUnlessAFlagIsGiven) {
  EXPECT_EQ(ResolveConfigPath(""), "");
  setenv(kConfigEnvVar, "/from/env.json", 1);
  EXPECT_EQ(ResolveConfigPath(""), "/from/env.json");
  EXPECT_EQ(ResolveConfigPath("/from/flag.json"), "/from/flag.json");

  setenv(kConfigEnvVar, SmallConfig(3).c_str(), 1);
  SimulateOptions options;
  options.out = (dir_ / "env.json").string();
  ASSERT_EQ(Simulate(options, out_, err_), kExitOk) << err_.str();
  EXPECT_EQ(ReadJson(options.out).at("metric_trace").size(), 3);
}

TEST_F(CliTest, BatchOverACountOfSeeds) {
  BatchOptions options;
  options.config_path = SmallConfig();
  options.first_seed = 10;
  options.num_seeds = 3;
  options.records_dir = (dir_ / "records").string();
  ASSERT_EQ(Batch(options, out_, err_), kExitOk) << err_.str();
  const std::string csv = out_.str();
  EXPECT_TRUE(absl::StartsWith(csv, "step,metric,mean,stderr,n\n"));
  EXPECT_THAT(csv, HasSubstr("curve-kg/regret"));
  for (int seed : {10, 11, 12}) {
    const fs::path record =
        dir_ / "records" / ("curve-kg-seed" + std::to_string(seed) + ".json");
    ASSERT_TRUE(fs::exists(record)) << record;
    EXPECT_EQ(ReadJson(record.string()).at("seed"), seed);
  }
  // Every aggregated row covers the three seeds.
  const std::vector<std::string> lines =
      absl::StrSplit(csv, '\n', absl::SkipEmpty());
  for (size_t i = 1; i < lines.size(); ++i) {
    EXPECT_TRUE(absl::EndsWith(lines[i], ",3")) << lines[i];
  }
}

TEST_F(CliTest, BatchComparesArmsAndDefaultsToTheConfiguredSeedCount) {
  BatchOptions options;
  options.config_path = SmallConfig();
  options.arms = "curve-kg,random";
  options.out = (dir_ / "batch.csv").string();
  ASSERT_EQ(Batch(options, out_, err_), kExitOk) << err_.str();
  std::ifstream in(options.out);
  const std::string csv((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  EXPECT_THAT(csv, HasSubstr("curve-kg/regret"));
  EXPECT_THAT(csv, HasSubstr("random/regret"));
  EXPECT_THAT(csv, HasSubstr(",2\n"));  // loop.num_seeds = 2
}

TEST_F(CliTest, BatchReadsSeedFiles) {
  BatchOptions options;
  options.config_path = SmallConfig();
  options.seeds_file = Write("seeds.txt", "# chosen in advance\n7\n\n9\n");
  ASSERT_EQ(Batch(options, out_, err_), kExitOk) << err_.str();
  EXPECT_THAT(out_.str(), HasSubstr(",2\n"));

  options.seeds_file = Write("empty.txt", "# nothing\n");
  EXPECT_EQ(Batch(options, out_, err_), kExitUsage);
  options.seeds_file = Write("bad.txt", "7\nseven\n");
  EXPECT_EQ(Batch(options, out_, err_), kExitUsage);
  EXPECT_THAT(err_.str(), HasSubstr("bad.txt:2"));
  options.seeds_file.clear();
  options.num_seeds = 0;
  EXPECT_EQ(Batch(options, out_, err_), kExitUsage);
}

class FitTest : public CliTest {
 protected:
  // Closed-form accuracies on a log-spaced epsilon range.
  std::string ClosedFormData(int rows, double eps_min, double eps_max,
                             double c) {
    std::string csv = "epsilon,accuracy\n";
    for (int i = 0; i < rows; ++i) {
      const double eps =
          eps_min * std::pow(eps_max / eps_min, i / (rows - 1.0));
      csv += std::to_string(eps) + "," +
             std::to_string(ClosedFormLogisticAccuracy(c, eps)) + "\n";
    }
    return Write("data.csv", csv);
  }

  static double Param(const std::string& text, const std::string& name) {
    const size_t at = text.find(" " + name + "=");
    EXPECT_NE(at, std::string::npos) << name;
    const size_t start = at + name.size() + 2;
    const size_t end = text.find_first_of(" \n", start);
    double value = NAN;
    EXPECT_TRUE(absl::SimpleAtod(text.substr(start, end - start), &value));
    return value;
  }
};

TEST_F(FitTest, RecoversTheClosedFormFront) {
  FitOptions options;
  // Over [1e-4, 0.15] with C = 100 the curve runs from about 0.5 to 1, and
  // in normalized coordinates it is exactly a Gompertz front with L = b = 1.
  options.data = ClosedFormData(40, 1e-4, 0.15, 100);
  options.kind = "gompertz";
  ASSERT_EQ(Fit(options, out_, err_), kExitOk) << err_.str();
  const std::string text = out_.str();
  EXPECT_THAT(text, HasSubstr("kind: gompertz"));
  EXPECT_THAT(Param(text, "b"), DoubleNear(1, 0.02));
  EXPECT_THAT(Param(text, "L"), DoubleNear(1, 0.02));
  EXPECT_THAT(text, HasSubstr("flat: no"));
  // The reported curve is in raw accuracy and matches the closed form.
  const std::string table = text.substr(text.find("epsilon,p,accuracy_fit\n"));
  const std::vector<std::string> rows =
      absl::StrSplit(table, '\n', absl::SkipEmpty());
  ASSERT_EQ(rows.size(), 51);
  for (size_t i = 1; i < rows.size(); ++i) {
    const std::vector<std::string> cells = absl::StrSplit(rows[i], ',');
    double eps = 0;
    double fitted = 0;
    ASSERT_TRUE(absl::SimpleAtod(cells[0], &eps));
    ASSERT_TRUE(absl::SimpleAtod(cells[2], &fitted));
    EXPECT_THAT(fitted, DoubleNear(ClosedFormLogisticAccuracy(100, eps), 0.01))
        << rows[i];
  }
}

TEST_F(FitTest, SigmoidFitsTheClosedFormClosely) {
  FitOptions options;
  options.data = ClosedFormData(40, 0.01, 0.5, 5);
  ASSERT_EQ(Fit(options, out_, err_), kExitOk) << err_.str();
  const std::string text = out_.str();
  EXPECT_THAT(text, HasSubstr("kind: sigmoid"));
  const size_t at = text.find("residual_norm: ");
  ASSERT_NE(at, std::string::npos);
  double residual = 1;
  ASSERT_TRUE(absl::SimpleAtod(
      text.substr(at + 15, text.find(' ', at + 15) - at - 15), &residual));
  // Root-mean-square error of the normalized fit below 0.05.
  EXPECT_LT(residual / std::sqrt(40.0), 0.05);
}

TEST_F(FitTest, GridSpansTheDataRange) {
  FitOptions options;
  options.data = ClosedFormData(20, 0.01, 0.5, 5);
  options.grid = 11;
  ASSERT_EQ(Fit(options, out_, err_), kExitOk) << err_.str();
  const std::string text = out_.str();
  const std::string table = text.substr(text.find("epsilon,p,accuracy_fit\n"));
  std::vector<std::string> rows = absl::StrSplit(table, '\n', absl::SkipEmpty());
  ASSERT_EQ(rows.size(), 12);
  // Normalized privacy 0 is the largest epsilon and 1 the smallest.
  EXPECT_TRUE(absl::StartsWith(rows[1], "0.5,0.000000,")) << rows[1];
  EXPECT_TRUE(absl::StartsWith(rows[11], "0.01,1.000000,")) << rows[11];
}

TEST_F(FitTest, RejectsUnusableData) {
  FitOptions options;
  options.data = Write("short.csv", "epsilon,accuracy\n0.1,0.6\n0.2,0.7\n0.3,0.8\n");
  EXPECT_EQ(Fit(options, out_, err_), kExitUsage);
  options.data = Write("malformed.csv",
                       "epsilon,accuracy\n0.1,0.6\n0.2,0.7\n0.3;0.8\n0.4,0.9\n");
  EXPECT_EQ(Fit(options, out_, err_), kExitUsage);
  EXPECT_THAT(err_.str(), HasSubstr("malformed.csv:4"));
  options.data = ClosedFormData(10, 0.01, 0.5, 5);
  options.data = Write("constant.csv",
                       "epsilon,accuracy\n0.1,0.7\n0.2,0.7\n0.3,0.7\n0.4,0.7\n");
  EXPECT_EQ(Fit(options, out_, err_), kExitUsage);
  options.data = ClosedFormData(10, 0.01, 0.5, 5);
  options.kind = "spline";
  EXPECT_EQ(Fit(options, out_, err_), kExitUsage);
  options.kind = "sigmoid";
  options.grid = 1;
  EXPECT_EQ(Fit(options, out_, err_), kExitUsage);
}

TEST_F(CliTest, OracleCheckAgreesWithTheClosedForm) {
  OracleCheckOptions options;
  options.samples = 200000;
  ASSERT_EQ(OracleCheck(options, out_, err_), kExitOk) << err_.str();
  const std::vector<std::string> rows =
      absl::StrSplit(out_.str(), '\n', absl::SkipEmpty());
  ASSERT_GE(rows.size(), 5);
  EXPECT_EQ(rows[0], "epsilon,closed_form,monte_carlo,std_error,pass");
  for (size_t i = 1; i < 5; ++i) {
    EXPECT_TRUE(absl::EndsWith(rows[i], ",pass")) << rows[i];
  }
}

TEST_F(CliTest, OracleCheckValidatesArguments) {
  OracleCheckOptions options;
  options.samples = 1;
  options.epsilons = {1000};  // accuracy ~1: a single draw is correct
  EXPECT_EQ(OracleCheck(options, out_, err_), kExitOk) << out_.str();
  options = {};
  options.c = 0;
  EXPECT_EQ(OracleCheck(options, out_, err_), kExitUsage);
  options = {};
  options.samples = 0;
  EXPECT_EQ(OracleCheck(options, out_, err_), kExitUsage);
  options = {};
  options.epsilons = {};
  EXPECT_EQ(OracleCheck(options, out_, err_), kExitUsage);
  options.epsilons = {-0.1};
  EXPECT_EQ(OracleCheck(options, out_, err_), kExitUsage);
}

}  // namespace
}  // namespace dptradeoff::cli
