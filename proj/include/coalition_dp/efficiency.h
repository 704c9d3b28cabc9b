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

// Price of Stability: how much worse the best self-enforcing coalition is
// than the designer's optimum, for social cost and for estimator variance.

#ifndef COALITION_DP_EFFICIENCY_H_
#define COALITION_DP_EFFICIENCY_H_

#include <optional>
#include <span>

#include "absl/status/statusor.h"
#include "coalition_dp/centralized.h"
#include "coalition_dp/core_model.h"
#include "coalition_dp/decentralized.h"
#include "coalition_dp/loglog_fit.h"

namespace coalition_dp {

struct StableOptimum {
  Coalition coalition;  // empty when nothing is stable
  double social_cost = 0.0;
  double variance = 0.0;  // sigma^2 for the empty coalition
};

// Selects among stable coalitions. Identical costs and, for Nash,
// well-separated costs are solved structurally at any n; other instances are
// enumerated when n <= options.max_n and refused otherwise.
absl::StatusOr<StableOptimum> OptimalStableCoalition(
    const ProblemInstance& instance, StabilityKind kind,
    const EnumerationOptions& options = {});

// Variance-minimizing stable coalition, same search space as above.
absl::StatusOr<StableOptimum> VarianceOptimalStableCoalition(
    const ProblemInstance& instance, StabilityKind kind,
    const EnumerationOptions& options = {});

struct PosReport {
  double pos_sc = 1.0;
  double pos_var = 1.0;
  Coalition decentral_coalition;
  CentralizedSolution central_solution;
  std::optional<double> bound_high_alpha;  // set when alpha > 1/2
  // Variant where pos_var compares the variance-minimizing coalitions of
  // each setting instead of the social-cost minimizers.
  std::optional<double> pos_var_variance_optimal;
};

struct PosOptions {
  EnumerationOptions enumeration;
  bool variance_optimal_diagnostic = false;
};

absl::StatusOr<PosReport> PriceOfStability(const ProblemInstance& instance,
                                           StabilityKind kind,
                                           const PosOptions& options = {});

// max(4/3, 2^{1/3} sigma^2 / (3 c_min^{2/3})).
absl::StatusOr<double> PosBoundHighAlpha(const ProblemInstance& instance);

// Identical-cost scaling setup: unit cost and a data variance at which the
// asymptotic regime of `alpha` is in force on every n of the grid.
struct ScalingParameters {
  double cost = 1.0;
  double sigma_sq = 1.0;
};
absl::StatusOr<ScalingParameters> CalibrateScalingParameters(
    double alpha, std::span<const int> n_grid);

// Log-log fit of pos_var against n on calibrated identical-cost instances.
absl::StatusOr<LogLogFit> PosVarianceExponentCheck(
    double alpha, std::span<const int> n_grid,
    StabilityKind kind = StabilityKind::kNash);

}  // namespace coalition_dp

#endif  // COALITION_DP_EFFICIENCY_H_
