// Copyright 2026 The rxreturn Authors.
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

// Drives the built command-line tool as a subprocess.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rxreturn/generate.hpp"
#include "rxreturn/io.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace rxreturn {
namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  static int counter = 0;
  const auto dir = fs::temp_directory_path() / "rxreturn_cli_out";
  fs::create_directories(dir);
  const auto out = dir / ("run" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string("\"") + RXRETURN_CLI + "\" " + args + " > \"" +
                          out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

std::string fixture(const std::string& name) {
  return "\"" + (testing::data_dir() / name).string() + "\"";
}

TEST(Cli, ValidateSummarizesFixture) {
  const auto r = run("validate " + fixture("middlesex"));
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("20 sites, 8 zones, 12 profiles"), std::string::npos) << r.out;
}

TEST(Cli, MissingFileIsAnInputError) {
  const auto dir = testing::scratch_dir("cli_missing");
  for (const auto& e : fs::directory_iterator(testing::data_dir() / "t1")) {
    fs::copy_file(e.path(), dir / e.path().filename());
  }
  fs::remove(dir / "quantities.csv");
  const auto r = run("validate \"" + dir.string() + "\"");
  EXPECT_EQ(r.exit_code, 2);
  const auto json = nlohmann::json::parse(r.out);
  EXPECT_FALSE(json["valid"].get<bool>());
  EXPECT_EQ(json["errors"][0]["code"], "MissingFile");
}

TEST(Cli, DuplicateIdIsAnInputError) {
  const auto dir = testing::scratch_dir("cli_duplicate");
  for (const auto& e : fs::directory_iterator(testing::data_dir() / "t1")) {
    fs::copy_file(e.path(), dir / e.path().filename());
  }
  {
    std::ofstream app(dir / "sites.csv", std::ios::app);
    app << "K1,Copy,2000,30000\n";
  }
  const auto r = run("validate \"" + dir.string() + "\"");
  EXPECT_EQ(r.exit_code, 2) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["errors"][0]["code"], "DuplicateId");
}

TEST(Cli, SolveWritesReportAndTables) {
  const auto dir = testing::scratch_dir("cli_solve");
  const auto r = run("solve " + fixture("t1") + " -o \"" + (dir / "r.json").string() +
                     "\" --assignments \"" + (dir / "a.csv").string() + "\" --quantities \"" +
                     (dir / "q.csv").string() + "\" --trace \"" + (dir / "t.jsonl").string() +
                     "\"");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("total 8666.67"), std::string::npos) << r.out;
  const auto json = nlohmann::json::parse(slurp(dir / "r.json"));
  EXPECT_NEAR(json["cost"]["total"].get<double>(), 8666.666666666666, 1e-6);
  EXPECT_TRUE(audit_report(testing::load_fixture("t1"), json).empty());
  EXPECT_EQ(slurp(dir / "a.csv"), "site_id,zone_id,profile_id,pills,incentive\nK1,Z1,P1,10000,12\n");
  EXPECT_FALSE(slurp(dir / "t.jsonl").empty());
}

TEST(Cli, ThetaZeroOpensNothing) {
  const auto r = run("solve " + fixture("t1") + " --theta 0");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("opened 0 kiosks"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("total 0.00"), std::string::npos) << r.out;
}

TEST(Cli, BadOverrideIsAnInputError) {
  const auto r = run("solve " + fixture("t1") + " --level extreme");
  EXPECT_EQ(r.exit_code, 2) << r.out;
}

TEST(Cli, IterationLimitHasItsOwnExitCode) {
  const auto r = run("--max-iter 1 solve " + fixture("middlesex") + " --theta 0.8 --level medium");
  EXPECT_EQ(r.exit_code, 4) << r.out;
  EXPECT_NE(r.out.find("iteration_limit"), std::string::npos);
}

TEST(Cli, OracleAgreesOnSmallInstances) {
  auto r = run("oracle " + fixture("t1"));
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["oracle_objective"].get<double>(), 8666.666666666666,
              1e-6);

  const auto dir = testing::scratch_dir("cli_oracle");
  ASSERT_EQ(run("--seed 7 generate \"" + dir.string() + "\" --sites 6 --zones 3 --profiles 2")
                .exit_code,
            0);
  r = run("oracle \"" + dir.string() + "\" --level high --theta 0.9");
  EXPECT_EQ(r.exit_code, 0) << r.out;
}

TEST(Cli, OracleRefusesLargeInstances) {
  const auto dir = testing::scratch_dir("cli_oracle_big");
  ASSERT_EQ(run("generate \"" + dir.string() + "\" --sites 25").exit_code, 0);
  const auto r = run("oracle \"" + dir.string() + "\"");
  EXPECT_EQ(r.exit_code, 3) << r.out;
  EXPECT_NE(r.out.find("TooManySites"), std::string::npos) << r.out;
}

TEST(Cli, GenerateIsDeterministic) {
  const auto a = testing::scratch_dir("cli_gen_a");
  const auto b = testing::scratch_dir("cli_gen_b");
  ASSERT_EQ(run("--seed 42 generate \"" + a.string() + "\"").exit_code, 0);
  ASSERT_EQ(run("--seed 42 generate \"" + b.string() + "\"").exit_code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
    ++files;
  }
  EXPECT_EQ(files, 6u);
  EXPECT_EQ(run("validate \"" + a.string() + "\"").exit_code, 0);
  const auto c = testing::scratch_dir("cli_gen_c");
  ASSERT_EQ(run("--seed 43 generate \"" + c.string() + "\"").exit_code, 0);
  EXPECT_NE(slurp(a / "quantities.csv"), slurp(c / "quantities.csv"));
}

TEST(Cli, SweepMatchesSingleSolves) {
  const auto dir = testing::scratch_dir("cli_sweep");
  const auto csv = dir / "sweep.csv";
  const auto r = run("--workers 2 sweep " + fixture("middlesex") + " -o \"" + csv.string() + "\"");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  std::istringstream lines(slurp(csv));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "theta,level,fixed,incentive,penalty,total,opened_count,status");
  std::size_t rows = 0;
  std::string first;
  while (std::getline(lines, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  EXPECT_EQ(rows, 9u);

  const auto single = dir / "single.csv";
  EXPECT_EQ(run("sweep " + fixture("middlesex") + " --thetas 0.5 --levels low -o \"" +
                single.string() + "\"")
                .exit_code,
            0);
  EXPECT_EQ(slurp(single),
            "theta,level,fixed,incentive,penalty,total,opened_count,status\n" + first + "\n");
}

}  // namespace
}  // namespace rxreturn
