// Copyright 2026 The dpdt Authors
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
//
// End-to-end checks of the command-line tool: output payloads and the exit
// code contract (0 success, 1 failed verdict, 2 usage or parse error).

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace {

const std::string kCli = DPDT_CLI_PATH;
const std::string kDataDir = DPDT_DATA_DIR;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string command = kCli + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  std::string output;
  std::array<char, 4096> buffer;
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe))
    output.append(buffer.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

nlohmann::json parse_output(const RunResult& r) {
  return nlohmann::json::parse(r.output);
}

TEST(Cli, AuditEmitsAnExactProfile) {
  RunResult r = run("audit --mechanism " + kDataDir + "/noisy_count.json");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  nlohmann::json j = parse_output(r);
  EXPECT_EQ(j["tightest"]["e_eps"], "2");
  EXPECT_FALSE(j["tightest"]["infinite"].get<bool>());
  EXPECT_NEAR(j["tightest"]["epsilon"].get<double>(), 0.693147, 1e-5);
  auto curve = j["delta_curve"];
  EXPECT_EQ(curve.front()["e_eps"], "1");
  EXPECT_EQ(curve.back()["delta"], "0");
}

TEST(Cli, AuditChecksSuppliedParameters) {
  std::string base = "audit --mechanism " + kDataDir + "/randomized_response.json";
  RunResult ok = run(base + " --check-eps 'ln(3)' --check-delta 0");
  EXPECT_EQ(ok.exit_code, 0) << ok.output;
  EXPECT_TRUE(parse_output(ok)["check"]["satisfied"].get<bool>());

  RunResult violated = run(base + " --check-eps 'ln(2)' --check-delta 1/10");
  EXPECT_EQ(violated.exit_code, 1) << violated.output;
  nlohmann::json j = parse_output(violated);
  EXPECT_FALSE(j["check"]["satisfied"].get<bool>());
  EXPECT_EQ(j["check"]["tight_delta"], "1/4");
  EXPECT_TRUE(j["check"].contains("witness"));
}

TEST(Cli, BoundsReportsTheWorstGap) {
  RunResult r = run("bounds --scenario " + kDataDir + "/hcua.json");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  nlohmann::json j = parse_output(r);
  EXPECT_TRUE(j["euclidean"]["holds"].get<bool>());
  EXPECT_EQ(j["euclidean"]["lhs"]["exact"], "2/7");
  EXPECT_EQ(j["euclidean"]["rhs"]["exact"], "2");
  EXPECT_EQ(j["audited_e_eps"], "2");
  // The sign-changing utility disqualifies the ratio-scale report.
  EXPECT_FALSE(j.contains("ratio"));

  RunResult shifted = run("bounds --scenario " + kDataDir + "/hcua_shifted.json");
  ASSERT_EQ(shifted.exit_code, 0) << shifted.output;
  EXPECT_TRUE(parse_output(shifted)["ratio"]["holds"].get<bool>());
}

TEST(Cli, ParticipationVerdictsDriveTheExitCode) {
  RunResult satisfied =
      run("participation --scenario " + kDataDir + "/laplace_optin.json");
  EXPECT_EQ(satisfied.exit_code, 0) << satisfied.output;
  EXPECT_EQ(parse_output(satisfied)["compensation"]["kind"], "none-needed");

  RunResult violated =
      run("participation --scenario " + kDataDir + "/laplace_optout.json");
  EXPECT_EQ(violated.exit_code, 1) << violated.output;
  nlohmann::json j = parse_output(violated);
  EXPECT_FALSE(j["participation"]["satisfied"].get<bool>());
  EXPECT_EQ(j["compensation"]["kind"], "finite");

  RunResult infeasible =
      run("participation --scenario " + kDataDir + "/unlimited_stakes.json");
  EXPECT_EQ(infeasible.exit_code, 1) << infeasible.output;
  EXPECT_EQ(parse_output(infeasible)["compensation"]["kind"], "infeasible");

  RunResult reveal =
      run("participation --scenario " + kDataDir + "/maimonides_reveal.json");
  EXPECT_EQ(reveal.exit_code, 1) << reveal.output;
  nlohmann::json rj = parse_output(reveal);
  EXPECT_EQ(rj["compensation"]["kind"], "infeasible");
  EXPECT_EQ(rj["compensation"]["amount"]["exact"], "1/20*w^1");
}

TEST(Cli, CompareMatchesTheWorkedConditions) {
  RunResult second = run("compare --eps 0.25 --delta 0 --eps2 0 --delta2 0.1 --c 2");
  EXPECT_EQ(second.exit_code, 0);
  EXPECT_EQ(parse_output(second)["verdict"], "SecondCheaper");

  RunResult first = run("compare --eps 0.1 --delta 0 --eps2 0 --delta2 0.1 --c 2");
  EXPECT_EQ(parse_output(first)["verdict"], "FirstCheaper");

  RunResult equal = run("compare --eps 'ln(6/5)' --delta 0 --eps2 0 --delta2 1/10 --c 2");
  EXPECT_EQ(parse_output(equal)["verdict"], "Equal");
}

TEST(Cli, ReproduceRunsEveryScenario) {
  for (const char* scenario :
       {"hcua", "laplace-optout", "unlimited-stakes", "maimonides"}) {
    RunResult r = run(std::string("reproduce ") + scenario);
    EXPECT_EQ(r.exit_code, 0) << scenario << "\n" << r.output;
    nlohmann::json j = parse_output(r);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["scenario"], scenario);
  }
  RunResult custom = run("reproduce unlimited-stakes --n 5 --eps 2");
  EXPECT_EQ(custom.exit_code, 0);
}

TEST(Cli, UsageAndParseErrorsExitWithTwo) {
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("audit").exit_code, 2);  // missing required option
  EXPECT_EQ(run("reproduce nonesuch").exit_code, 2);
  EXPECT_EQ(run("audit --mechanism /nonexistent.json").exit_code, 2);
  EXPECT_EQ(run("reproduce hcua --eps 0.3").exit_code, 2);  // needs ln(p/q)

  RunResult bad = run("participation --scenario " + kDataDir + "/noisy_count.json");
  EXPECT_EQ(bad.exit_code, 2);  // mechanism file, not a scenario file
  EXPECT_NE(bad.output.find("mechanism"), std::string::npos) << bad.output;

  // bounds needs a finite table; the threshold family is handled elsewhere.
  RunResult threshold_bounds =
      run("bounds --scenario " + kDataDir + "/laplace_optout.json");
  EXPECT_EQ(threshold_bounds.exit_code, 2);
}

TEST(Cli, HelpIsAvailablePerSubcommand) {
  RunResult help = run("--help");
  EXPECT_EQ(help.exit_code, 0);
  EXPECT_NE(help.output.find("audit"), std::string::npos);
  RunResult sub = run("compare --help");
  EXPECT_EQ(sub.exit_code, 0);
  EXPECT_NE(sub.output.find("--delta2"), std::string::npos);
}

}  // namespace
