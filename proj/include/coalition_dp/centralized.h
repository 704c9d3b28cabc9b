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

// Social optimum chosen by a designer who controls both membership and
// privacy levels. At a fixed size k the optimal coalition is the k cheapest
// players, so the search reduces to a scan over k.

#ifndef COALITION_DP_CENTRALIZED_H_
#define COALITION_DP_CENTRALIZED_H_

#include <optional>

#include "absl/status/statusor.h"
#include "coalition_dp/core_model.h"

namespace coalition_dp {

struct CentralizedSolution {
  int k_star = 0;  // 0 or >= 2
  Coalition coalition;
  PrivacyProfile profile;
  double social_cost = 0.0;
  // Unset when k_star == 0: there is no pooled estimator.
  std::optional<double> variance;
};

enum class CentralRegime { kGrandCoalition, kBoundaryHalf, kConstantOrEmpty };

struct RegimeLabel {
  CentralRegime regime;
  double predicted_var_exponent;
  double predicted_sc_exponent;
};

// (4 / (k^{1+alpha} c))^{1/3}.
double CentralEpsilon(double cost, int k, double alpha);

PrivacyProfile CentralProfile(const Coalition& coalition,
                              const ProblemInstance& instance);

// Closed-form variance at the optimal size-k coalition. Requires 2 <= k <= n.
absl::StatusOr<double> CentralVarianceAtSize(const ProblemInstance& instance,
                                             int k);
// Closed-form social cost at the optimal size-k coalition.
absl::StatusOr<double> CentralSocialCostAtSize(const ProblemInstance& instance,
                                               int k);

// Exact linear scan over k in {2..n}; ties go to the smaller k. Returns
// k_star = 0 when no size beats n * sigma^2.
CentralizedSolution SolveCentralized(const ProblemInstance& instance);

RegimeLabel ClassifyRegimeCentralized(double alpha);

const char* RegimeName(CentralRegime regime);

}  // namespace coalition_dp

#endif  // COALITION_DP_CENTRALIZED_H_
