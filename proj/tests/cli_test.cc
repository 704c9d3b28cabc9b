//
// Copyright 2026 The coalition-dp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "coalition_dp/cli.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace coalition_dp {
namespace {

constexpr char kMultiplicity[] =
    R"({"alpha":1,"sigma_sq":0.25,"costs":[0.0018,0.00215,0.0022,0.015,0.0155,0.017]})";

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(ParseInstanceTest, InlineDocument) {
  absl::StatusOr<ProblemInstance> instance = ParseInstance(kMultiplicity);
  ASSERT_TRUE(instance.ok()) << instance.status();
  EXPECT_EQ(instance->n(), 6);
  EXPECT_EQ(instance->alpha(), 1.0);
  EXPECT_EQ(instance->sigma_sq(), 0.25);
  EXPECT_EQ(instance->cost(3), 0.015);
}

TEST(ParseInstanceTest, UnsortedCostsCanonicalize) {
  const ProblemInstance sorted = *ParseInstance(
      R"({"alpha":0,"sigma_sq":1,"costs":[1,2,3]})");
  const ProblemInstance shuffled = *ParseInstance(
      R"({"alpha":0,"sigma_sq":1,"costs":[3,1,2]})");
  EXPECT_EQ(std::vector<double>(sorted.costs().begin(), sorted.costs().end()),
            std::vector<double>(shuffled.costs().begin(),
                                shuffled.costs().end()));
}

TEST(ParseInstanceTest, DistinctErrorCodes) {
  const std::pair<const char*, const char*> cases[] = {
      {R"({"alpha":2,"sigma_sq":1,"costs":[1]})", "alpha_out_of_range"},
      {R"({"alpha":0,"sigma_sq":0,"costs":[1]})", "sigma_sq_non_positive"},
      {R"({"alpha":0,"sigma_sq":1,"costs":[1,-1]})", "non_positive_cost"},
      {R"({"alpha":0,"costs":[1]})", "missing_key"},
      {R"({"alpha":0,"sigma_sq":1,"costs":"x"})", "malformed"},
      {R"({"alpha":0,)", "malformed"},
  };
  for (const auto& [text, code] : cases) {
    absl::StatusOr<ProblemInstance> instance = ParseInstance(text);
    ASSERT_FALSE(instance.ok()) << text;
    EXPECT_EQ(InstanceErrorCode(instance.status()), code) << text;
  }
}

TEST(ParseInstanceTest, ReadsFiles) {
  const std::string path = testing::TempDir() + "/instance.json";
  std::ofstream(path) << kMultiplicity;
  EXPECT_EQ(*ParseInstance(path), *ParseInstance(kMultiplicity));
  EXPECT_FALSE(ParseInstance(testing::TempDir() + "/missing.json").ok());
}

TEST(EmitInstanceTest, RoundTrips) {
  for (const char* text :
       {kMultiplicity, R"({"alpha":-0.3,"sigma_sq":0.1,"costs":[0.3,0.1,0.2,0.1]})"}) {
    const ProblemInstance instance = *ParseInstance(text);
    EXPECT_EQ(*ParseInstance(EmitInstance(instance)), instance);
  }
}

TEST(RunCliTest, EquilibriaListsBothCoalitions) {
  const CliResult run =
      Cli({"equilibria", "--instance", kMultiplicity, "--stability", "nash"});
  EXPECT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("\"{1,2,3,4}\",4,1.27,0.149166"), std::string::npos);
  EXPECT_NE(run.out.find("\"{1,2,3,5}\",4,1.2764,0.150233"), std::string::npos);
}

TEST(RunCliTest, Centralized) {
  const CliResult run = Cli({"centralized", "--instance", kMultiplicity});
  EXPECT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("k_star: 4"), std::string::npos);
  EXPECT_NE(run.out.find("coalition: {1,2,3,4}"), std::string::npos);
}

TEST(RunCliTest, Pos) {
  const CliResult run =
      Cli({"pos", "--instance", kMultiplicity, "--stability", "robust"});
  EXPECT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("pos_sc: "), std::string::npos);
  EXPECT_NE(run.out.find("bound_high_alpha: "), std::string::npos);
}

TEST(RunCliTest, SweepSigmaWritesCsv) {
  const std::string path = testing::TempDir() + "/sweep.csv";
  const CliResult run = Cli({"sweep-sigma", "--instance", kMultiplicity, "--grid",
                       "0.2:0.3:0.05", "--output", path, "--seed", "5"});
  EXPECT_EQ(run.code, 0) << run.err;
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 2 + 3);
}

TEST(RunCliTest, SweepN) {
  const CliResult run = Cli({"sweep-n", "--instance",
                       R"({"alpha":-1,"sigma_sq":0.5,"costs":[1]})", "--grid",
                       "16:64:x2"});
  EXPECT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("slope sc_decentral"), std::string::npos);
}

TEST(RunCliTest, Simulate) {
  const CliResult run =
      Cli({"simulate", "--instance", kMultiplicity, "--coalition", "1,2,3,4",
           "--samples", "20000", "--distribution", "point_mass"});
  EXPECT_EQ(run.code, 0) << run.err;
  EXPECT_NE(run.out.find("z_score: "), std::string::npos);
}

TEST(RunCliTest, ExitCodes) {
  EXPECT_EQ(Cli({"frobnicate"}).code, 2);
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"pos", "--instance", kMultiplicity, "--stability", "core"})
                .code,
            2);
  EXPECT_EQ(Cli({"sweep-sigma", "--instance", kMultiplicity, "--grid", "bad"})
                .code,
            2);
  const CliResult bad = Cli(
      {"centralized", "--instance", R"({"alpha":2,"sigma_sq":1,"costs":[1]})"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("alpha_out_of_range"), std::string::npos);
  EXPECT_EQ(Cli({"simulate", "--instance", kMultiplicity, "--coalition", "1,9"})
                .code,
            1);
}

}  // namespace
}  // namespace coalition_dp
