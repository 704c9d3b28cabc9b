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

#include "coalition_dp/experiments.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "coalition_dp/centralized.h"
#include "gtest/gtest.h"

namespace coalition_dp {
namespace {

const std::vector<double> kFigureCosts = {2.2e-4, 5.4e-4, 7e-4,  11e-4, 30e-4,
                                          33e-4,  34e-4,  36e-4, 38e-4};

TEST(UniformUnitTest, RangeAndDeterminism) {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = UniformUnit(a);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_EQ(u, UniformUnit(b));
  }
}

TEST(SweepSigmaTest, FigureInstance) {
  const std::vector<double> grid = DefaultSigmaGrid();
  ASSERT_EQ(grid.size(), 91u);
  const std::vector<SweepRow> rows = *SweepSigma(kFigureCosts, 1.0, grid);
  ASSERT_EQ(rows.size(), grid.size());
  int previous = 0;
  bool gap = false;
  for (const SweepRow& r : rows) {
    EXPECT_EQ(r.max_nash_size == 0, !r.nash_exists);
    EXPECT_EQ(r.max_robust_size == 0, !r.robust_exists);
    EXPECT_GE(r.max_robust_size, previous);
    previous = r.max_robust_size;
    if (r.robust_exists && !r.nash_exists) gap = true;
    if (std::abs(r.sigma - 0.25) < 1e-9) EXPECT_TRUE(r.nash_exists);
    if (std::abs(r.sigma - 0.40) < 1e-9) {
      EXPECT_FALSE(r.nash_exists);
      EXPECT_TRUE(r.robust_exists);
    }
    if (!r.nash_exists) EXPECT_DOUBLE_EQ(r.best_sc_nash, 9 * r.sigma * r.sigma);
  }
  EXPECT_TRUE(gap);
}

TEST(SweepSigmaTest, RejectsBadGrids) {
  EXPECT_FALSE(SweepSigma(kFigureCosts, 1.0, std::vector<double>{0.3, 0.2}).ok());
  EXPECT_FALSE(SweepSigma(kFigureCosts, 1.0, std::vector<double>{-0.1}).ok());
}

TEST(SweepSigmaTest, Reproducible) {
  const std::vector<double> grid = {0.2, 0.25, 0.3};
  std::ostringstream a, b;
  WriteSweepCsv(*SweepSigma(kFigureCosts, 1.0, grid), {.seed = 3}, a);
  WriteSweepCsv(*SweepSigma(kFigureCosts, 1.0, grid), {.seed = 3}, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(SweepScalingTest, DecentralizedExponentsWithAmplification) {
  const std::vector<int> grid = DefaultScalingGrid();
  for (double alpha : {-1.0, -0.75}) {
    const ScalingParameters p = *CalibrateScalingParameters(alpha, grid);
    const ScalingResult result =
        *SweepScaling(alpha, p.cost, p.sigma_sq, grid);
    for (const ScalingRow& row : result.rows) {
      EXPECT_GT(row.sc_decentral, 0);
      EXPECT_GT(row.var_central, 0);
    }
    EXPECT_NEAR(result.fits.sc_decentral.slope, (2 * alpha + 4) / 3, 0.05);
    EXPECT_NEAR(result.fits.var_decentral.slope, (2 * alpha + 1) / 3, 0.05);
    EXPECT_GE(result.fits.sc_decentral.r_squared, 0.99);
  }
}

TEST(SweepScalingTest, CentralizedExponentAtZeroAlpha) {
  const std::vector<int> grid = DefaultScalingGrid();
  const ScalingParameters p = *CalibrateScalingParameters(0.0, grid);
  const ScalingResult result = *SweepScaling(0.0, p.cost, p.sigma_sq, grid);
  EXPECT_NEAR(result.fits.sc_central.slope, 2.0 / 3, 0.05);
  EXPECT_NEAR(result.fits.var_central.slope, -1.0 / 3, 0.05);
}

TEST(MonteCarloTest, PointMassLeavesOnlyNoise) {
  const Coalition s = *Coalition::Create({0, 1, 2}, 3);
  const PrivacyProfile profile{{0.5, 1.0, 2.0}};
  const MonteCarloResult r = *MonteCarloVariance(
      s, profile,
      {.samples = 100000, .seed = 9,
       .distribution = DataDistribution::kPointMass});
  EXPECT_NEAR(r.predicted, 2.0 / 9 * (4 + 1 + 0.25), 1e-15);
  EXPECT_LT(std::abs(r.z_score), 3);
}

TEST(MonteCarloTest, UniformDataAtBestResponse) {
  const ProblemInstance instance = *ProblemInstance::Create(
      {0.0018, 0.00215, 0.0022, 0.015, 0.0155, 0.017}, 1.0 / 12, 1.0);
  const Coalition u1 = *Coalition::Create({0, 1, 2, 3}, 6);
  const MonteCarloResult r =
      *MonteCarloVariance(u1, instance, {.samples = 100000, .seed = 10});
  EXPECT_LT(std::abs(r.z_score), 3);
}

TEST(MonteCarloTest, DoublingLevelsQuartersNoise) {
  const Coalition s = *Coalition::Create({0, 1}, 2);
  MonteCarloConfig config{.samples = 100000,
                          .seed = 11,
                          .distribution = DataDistribution::kPointMass};
  const double base =
      MonteCarloVariance(s, PrivacyProfile{{1.0, 2.0}}, config)->empirical_var;
  config.seed = 12;
  const double doubled =
      MonteCarloVariance(s, PrivacyProfile{{2.0, 4.0}}, config)->empirical_var;
  EXPECT_NEAR(base / doubled, 4.0, 0.2);
}

TEST(MonteCarloTest, Errors) {
  EXPECT_FALSE(MonteCarloVariance(Coalition(), PrivacyProfile{}, {}).ok());
  const Coalition s = *Coalition::Create({0, 1}, 2);
  EXPECT_FALSE(MonteCarloVariance(s, PrivacyProfile{{1.0}}, {}).ok());
  EXPECT_FALSE(
      MonteCarloVariance(s, PrivacyProfile{{1.0, 1.0}}, {.samples = 1}).ok());
}

TEST(RandomInstanceTest, DeterministicAndValid) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const RandomInstanceOptions options{.n = 8, .seed = seed};
    const ProblemInstance a = *RandomInstance(options);
    EXPECT_EQ(a, *RandomInstance(options));
    EXPECT_EQ(a.n(), 8);
    EXPECT_GE(a.cost(0), options.c_min);
    EXPECT_LE(a.cost(7), options.c_max);
  }
}

TEST(RandomInstanceTest, WellSeparated) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const ProblemInstance a = *RandomInstance(
        {.n = 7, .c_min = 1e-4, .c_max = 1.0, .seed = seed,
         .well_separated = true});
    EXPECT_TRUE(a.IsWellSeparated());
    EXPECT_LE(a.cost(6), 1.0);
  }
  EXPECT_FALSE(RandomInstance({.n = 8, .c_min = 1, .c_max = 100,
                               .well_separated = true})
                   .ok());
}

TEST(CsvTest, SweepColumnsAndMeta) {
  const std::vector<SweepRow> rows = {
      {.sigma = 0.25, .max_nash_size = 4, .max_robust_size = 4,
       .nash_exists = true, .robust_exists = true, .best_sc_nash = 0.5,
       .best_sc_robust = 0.5}};
  std::ostringstream out;
  WriteSweepCsv(rows, {.seed = 42}, out);
  const std::vector<std::string> lines =
      absl::StrSplit(out.str(), '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0],
            "# meta seed=42 abs_tol=9.9999999999999998e-13 "
            "rel_tol=1.0000000000000001e-09 generator=mt19937_64");
  EXPECT_EQ(lines[1],
            "sigma,max_nash_size,max_robust_size,nash_exists,robust_exists,"
            "best_sc_nash,best_sc_robust");
  EXPECT_EQ(lines[2], "0.25,4,4,true,true,0.5,0.5");
}

TEST(CsvTest, ScalingRowCountAndFits) {
  const std::vector<int> grid = {16, 32, 64};
  const ScalingResult result = *SweepScaling(-1.0, 1.0, 0.5, grid);
  std::ostringstream out;
  WriteScalingCsv(result, {}, out);
  const std::vector<std::string> lines =
      absl::StrSplit(out.str(), '\n', absl::SkipEmpty());
  int data = 0, fits = 0;
  for (const std::string& line : lines) {
    if (line.rfind("# fit", 0) == 0) ++fits;
    else if (line[0] != '#' && line[0] != 'n') ++data;
  }
  EXPECT_EQ(data, 3);
  EXPECT_EQ(fits, 6);
  EXPECT_EQ(lines[1],
            "n,sc_central,var_central,sc_decentral,var_decentral,pos_sc,"
            "pos_var");
}

}  // namespace
}  // namespace coalition_dp
