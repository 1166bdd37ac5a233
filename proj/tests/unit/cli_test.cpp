// Copyright 2026 The dprocess Authors.
//
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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  const fs::path dir = fs::path(DPROCESS_TEST_TMPDIR) / "cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with stdout captured to `out` and returns its exit code.
int cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + DPROCESS_CLI_PATH + "\" " + args + " > \"" +
                          out.string() + "\" 2> \"" + out.string() + ".err\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, SimulateHappyPathAndDeterminism) {
  const auto a = scratch_dir() / "sim_a.json";
  const auto b = scratch_dir() / "sim_b.json";
  ASSERT_EQ(cli("simulate --n 1000 --d 2 --seed 7 --format json", a), 0);
  ASSERT_EQ(cli("simulate --n 1000 --d 2 --seed 7 --format json", b), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto j = nlohmann::json::parse(slurp(a));
  ASSERT_EQ(j.at("hitting_times").size(), 1u);
  EXPECT_TRUE(j.at("hitting_times")[0].is_number() || j.at("stuck").get<bool>());
}

TEST(CliTest, ParameterErrors) {
  const auto out = scratch_dir() / "err.txt";
  EXPECT_EQ(cli("simulate --n 1 --d 1 --seed 0", out), 2);
  EXPECT_EQ(cli("simulate --n 10 --d 2 --seed 0 --bogus", out), 2);
  EXPECT_EQ(cli("simulate --d 2 --seed 0", out), 2);
}

TEST(CliTest, Theory) {
  const auto out = scratch_dir() / "theory.json";
  ASSERT_EQ(cli("theory --d 2 --t 0 --format json", out), 0);
  auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j.at("y"), nlohmann::json::parse("[1.0, 0.0]"));
  EXPECT_EQ(j.at("s"), nlohmann::json::parse("[1.0, 1.0]"));

  ASSERT_EQ(cli("theory --d 3 --t 1.4999 --format json", out), 0);
  j = nlohmann::json::parse(slurp(out));
  EXPECT_LT(j.at("residual_implicit").get<double>(), 3e-12);
  EXPECT_LT(j.at("residual_sum").get<double>(), 1e-10);

  EXPECT_EQ(cli("theory --d 2 --t 1.0", out), 4);
  EXPECT_EQ(cli("theory --d 3 --n 100000 --i 140000", out), 0);
}

TEST(CliTest, Oracle) {
  const auto out = scratch_dir() / "oracle.json";
  ASSERT_EQ(cli("oracle --n 3 --d 2 --format json", out), 0);
  const auto j = nlohmann::json::parse(slurp(out));
  const auto& law = j.at("hitting_times")[0].at("law");
  ASSERT_EQ(law.size(), 1u);
  EXPECT_EQ(law[0].at("T"), 2);
  EXPECT_EQ(law[0].at("probability").at("exact"), "1");
  EXPECT_EQ(cli("oracle --n 9 --d 2", out), 4);
}

TEST(CliTest, ExperimentThenAnalyze) {
  const auto dir = scratch_dir();
  const auto results = dir / "pipeline.jsonl";
  fs::remove(results);
  const auto out = dir / "pipeline_stdout.txt";
  ASSERT_EQ(cli("experiment --n 3 --d 2 --trials 1000 --seed 3 -q -o \"" + results.string() + "\"",
                out),
            0);
  const auto report = dir / "report.json";
  ASSERT_EQ(cli("analyze --input \"" + results.string() + "\" --format json", report), 0);
  const auto j = nlohmann::json::parse(slurp(report));
  EXPECT_NEAR(j.at("levels")[0].at("mean_V").get<double>(), 2 / std::log(3.0), 1e-12);

  const std::string before = slurp(results);
  ASSERT_EQ(cli("analyze --input \"" + results.string() + "\"", report), 0);
  EXPECT_EQ(slurp(results), before);
}

TEST(CliTest, AnalyzeEmptyInput) {
  const auto dir = scratch_dir();
  const auto empty = dir / "empty.jsonl";
  std::ofstream(empty).close();
  const auto out = dir / "analyze_empty.txt";
  EXPECT_NE(cli("analyze --input \"" + empty.string() + "\"", out), 0);
  EXPECT_NE(slurp(fs::path(out.string() + ".err")).find("empty"), std::string::npos);
  EXPECT_EQ(cli("analyze --input \"" + (dir / "nope.jsonl").string() + "\"", out), 3);
}

TEST(CliTest, ExperimentOutputDirFromEnvironment) {
  const auto dir = scratch_dir() / "envout";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cmd = "DPROCESS_OUTPUT_DIR=\"" + dir.string() + "\" \"" +
                          DPROCESS_CLI_PATH + "\" experiment --n 20 --d 2 --trials 3 --seed 9 -q";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir / "results_n20_d2_s9.jsonl"));
}

}  // namespace
