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

#include "coalition_dp/centralized.h"

#include <cmath>
#include <vector>

#include "absl/strings/str_format.h"

namespace coalition_dp {
namespace {

const double kCubeRootTwo = std::cbrt(2.0);

absl::Status CheckSize(const ProblemInstance& instance, int k) {
  if (k < 2 || k > instance.n()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Coalition size %d is outside [2, %d]", k, instance.n()));
  }
  return absl::OkStatus();
}

// Mean of c_i^{2/3} over the k cheapest players.
double MeanCostTwoThirds(const ProblemInstance& instance, int k) {
  double sum = 0;
  for (int i = 0; i < k; ++i) {
    sum += std::cbrt(instance.cost(i) * instance.cost(i));
  }
  return sum / k;
}

double VarianceFromMean(double sigma_sq, double alpha, int k,
                        double mean_two_thirds) {
  const double kd = k;
  return (sigma_sq + std::pow(kd, 2.0 * (alpha + 1.0) / 3.0) / kCubeRootTwo *
                         mean_two_thirds) /
         kd;
}

double SocialCostFromMean(int n, double sigma_sq, double alpha, int k,
                          double mean_two_thirds) {
  const double kd = k;
  return (n + 1) * sigma_sq -
         (kd * sigma_sq - 3.0 / kCubeRootTwo *
                              std::pow(kd, 2.0 * (alpha + 1.0) / 3.0) *
                              mean_two_thirds);
}

}  // namespace

double CentralEpsilon(double cost, int k, double alpha) {
  return std::cbrt(4.0 / (std::pow(static_cast<double>(k), 1.0 + alpha) * cost));
}

PrivacyProfile CentralProfile(const Coalition& coalition,
                              const ProblemInstance& instance) {
  PrivacyProfile profile;
  for (int m : coalition.members()) {
    profile.levels.push_back(
        CentralEpsilon(instance.cost(m), coalition.size(), instance.alpha()));
  }
  return profile;
}

absl::StatusOr<double> CentralVarianceAtSize(const ProblemInstance& instance,
                                             int k) {
  if (absl::Status s = CheckSize(instance, k); !s.ok()) return s;
  return VarianceFromMean(instance.sigma_sq(), instance.alpha(), k,
                          MeanCostTwoThirds(instance, k));
}

absl::StatusOr<double> CentralSocialCostAtSize(const ProblemInstance& instance,
                                               int k) {
  if (absl::Status s = CheckSize(instance, k); !s.ok()) return s;
  return SocialCostFromMean(instance.n(), instance.sigma_sq(),
                            instance.alpha(), k,
                            MeanCostTwoThirds(instance, k));
}

CentralizedSolution SolveCentralized(const ProblemInstance& instance) {
  const int n = instance.n();
  const double empty_cost = n * instance.sigma_sq();

  // Running prefix sum keeps the scan linear in n.
  double prefix = std::cbrt(instance.cost(0) * instance.cost(0));
  int best_k = 0;
  double best_cost = 0;
  double best_mean = 0;
  for (int k = 2; k <= n; ++k) {
    prefix += std::cbrt(instance.cost(k - 1) * instance.cost(k - 1));
    const double mean = prefix / k;
    const double cost =
        SocialCostFromMean(n, instance.sigma_sq(), instance.alpha(), k, mean);
    if (best_k == 0 || cost < best_cost) {
      best_k = k;
      best_cost = cost;
      best_mean = mean;
    }
  }

  CentralizedSolution solution;
  if (best_k == 0 || best_cost > empty_cost) {
    solution.social_cost = empty_cost;
    return solution;
  }
  solution.k_star = best_k;
  solution.coalition = *Coalition::DownwardClosed(best_k, n);
  solution.profile = CentralProfile(solution.coalition, instance);
  solution.social_cost = best_cost;
  solution.variance =
      VarianceFromMean(instance.sigma_sq(), instance.alpha(), best_k, best_mean);
  return solution;
}

RegimeLabel ClassifyRegimeCentralized(double alpha) {
  if (alpha < 0.5) {
    return {.regime = CentralRegime::kGrandCoalition,
            .predicted_var_exponent = (2.0 * alpha - 1.0) / 3.0,
            .predicted_sc_exponent = 2.0 * (alpha + 1.0) / 3.0};
  }
  return {.regime = alpha == 0.5 ? CentralRegime::kBoundaryHalf
                                 : CentralRegime::kConstantOrEmpty,
          .predicted_var_exponent = 0.0,
          .predicted_sc_exponent = 1.0};
}

const char* RegimeName(CentralRegime regime) {
  switch (regime) {
    case CentralRegime::kGrandCoalition:
      return "grand_coalition";
    case CentralRegime::kBoundaryHalf:
      return "boundary_half";
    case CentralRegime::kConstantOrEmpty:
      return "constant_or_empty";
  }
  return "unknown";
}

}  // namespace coalition_dp
