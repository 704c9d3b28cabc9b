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

// Batch drivers: sweeps over the data variance and over the population size,
// Monte Carlo checks of the estimator variance, random instances, and CSV
// output for all of them.

#ifndef COALITION_DP_EXPERIMENTS_H_
#define COALITION_DP_EXPERIMENTS_H_

#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "coalition_dp/core_model.h"
#include "coalition_dp/decentralized.h"
#include "coalition_dp/efficiency.h"
#include "coalition_dp/loglog_fit.h"

namespace coalition_dp {

// Generator used everywhere randomness is needed; its name goes into output
// headers.
using Rng = std::mt19937_64;
inline constexpr char kRngName[] = "mt19937_64";

// Uniform on [0, 1) from the top 53 bits of one draw.
double UniformUnit(Rng& rng);

struct SweepRow {
  double sigma = 0.0;
  int max_nash_size = 0;
  int max_robust_size = 0;
  bool nash_exists = false;
  bool robust_exists = false;
  // n sigma^2 when no coalition of that kind is stable.
  double best_sc_nash = 0.0;
  double best_sc_robust = 0.0;
};

// One row per sigma of `sigma_grid` (ascending, positive), each from
// exhaustive enumeration under both stability kinds.
absl::StatusOr<std::vector<SweepRow>> SweepSigma(
    std::span<const double> costs, double alpha,
    std::span<const double> sigma_grid, const EnumerationOptions& options = {});

// sigma from 0.15 to 0.60 in steps of 0.005.
std::vector<double> DefaultSigmaGrid();

struct ScalingRow {
  int n = 0;
  double sc_central = 0.0;
  double var_central = 0.0;
  double sc_decentral = 0.0;
  double var_decentral = 0.0;
  double pos_sc = 0.0;
  double pos_var = 0.0;
};

struct ScalingFits {
  LogLogFit sc_central;
  LogLogFit var_central;
  LogLogFit sc_decentral;
  LogLogFit var_decentral;
  LogLogFit pos_sc;
  LogLogFit pos_var;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  ScalingFits fits;
};

// Identical-cost instances with n players for every n of the grid.
absl::StatusOr<ScalingResult> SweepScaling(
    double alpha, double cost, double sigma_sq, std::span<const int> n_grid,
    StabilityKind kind = StabilityKind::kNash);

// 16, 32, ..., 2048.
std::vector<int> DefaultScalingGrid();

enum class DataDistribution { kUniform01, kPointMass, kBernoulli };

struct MonteCarloConfig {
  int64_t samples = 100000;
  uint64_t seed = 1;
  DataDistribution distribution = DataDistribution::kUniform01;
  double bernoulli_p = 0.5;
};

// Variance of a single data point under the configured distribution.
double DataVariance(const MonteCarloConfig& config);

struct MonteCarloResult {
  double empirical_var = 0.0;
  double predicted = 0.0;
  double standard_error = 0.0;
  double z_score = 0.0;
};

// Simulates the pooled estimator: each member reports its data point plus
// Laplace(1/eps) noise. The prediction uses the distribution's own variance.
absl::StatusOr<MonteCarloResult> MonteCarloVariance(
    const Coalition& coalition, const PrivacyProfile& profile,
    const MonteCarloConfig& config);
// Same, at the best-response profile of `instance`.
absl::StatusOr<MonteCarloResult> MonteCarloVariance(
    const Coalition& coalition, const ProblemInstance& instance,
    const MonteCarloConfig& config);

struct RandomInstanceOptions {
  int n = 6;
  double c_min = 1e-3;
  double c_max = 1e-1;
  double alpha = 0.0;
  double sigma_sq = 0.25;
  uint64_t seed = 1;
  // Forces c_i >= 2 c_{i-1}; needs c_max >= 2^{n-1} c_min.
  bool well_separated = false;
};

absl::StatusOr<ProblemInstance> RandomInstance(
    const RandomInstanceOptions& options);

struct CsvMeta {
  uint64_t seed = 0;
  Tolerance tolerance;
};

void WriteSweepCsv(std::span<const SweepRow> rows, const CsvMeta& meta,
                   std::ostream& out);
void WriteScalingCsv(const ScalingResult& result, const CsvMeta& meta,
                     std::ostream& out);

}  // namespace coalition_dp

#endif  // COALITION_DP_EXPERIMENTS_H_
