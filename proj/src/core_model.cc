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

#include "coalition_dp/core_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_format.h"

namespace coalition_dp {

absl::Status ValidateTolerance(const Tolerance& tol) {
  if (!std::isfinite(tol.abs_tol) || !std::isfinite(tol.rel_tol) ||
      tol.abs_tol < 0 || tol.rel_tol < 0) {
    return absl::InvalidArgumentError(
        "Tolerance components must be finite and non-negative");
  }
  return absl::OkStatus();
}

Comparison GreaterOrEqual(double lhs, double rhs, const Tolerance& tol) {
  const double margin = tol.abs_tol + tol.rel_tol * std::abs(rhs);
  return {.holds = lhs - rhs >= -margin,
          .near_boundary = std::abs(lhs - rhs) <= margin};
}

Comparison StrictlyLess(double lhs, double rhs, const Tolerance& tol) {
  const double margin = tol.abs_tol + tol.rel_tol * std::abs(lhs);
  return {.holds = rhs - lhs > margin,
          .near_boundary = std::abs(rhs - lhs) <= margin};
}

absl::StatusOr<ProblemInstance> ProblemInstance::Create(
    std::vector<double> costs, double sigma_sq, double alpha) {
  if (costs.empty()) {
    return absl::InvalidArgumentError("At least one player is required");
  }
  for (size_t i = 0; i < costs.size(); ++i) {
    if (!std::isfinite(costs[i]) || costs[i] <= 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Cost at position %d must be finite and positive, got %g", i,
          costs[i]));
    }
  }
  if (!std::isfinite(sigma_sq) || sigma_sq <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sigma_sq must be finite and positive, got %g", sigma_sq));
  }
  if (!std::isfinite(alpha) || alpha < -1 || alpha > 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha must lie in [-1, 1], got %g", alpha));
  }

  std::vector<int> labels(costs.size());
  std::iota(labels.begin(), labels.end(), 0);
  std::stable_sort(labels.begin(), labels.end(),
                   [&costs](int a, int b) { return costs[a] < costs[b]; });
  std::vector<double> sorted(costs.size());
  for (size_t i = 0; i < labels.size(); ++i) sorted[i] = costs[labels[i]];
  return ProblemInstance(std::move(sorted), std::move(labels), sigma_sq,
                         alpha);
}

absl::StatusOr<ProblemInstance> ProblemInstance::WithSigmaSq(
    double sigma_sq) const {
  if (!std::isfinite(sigma_sq) || sigma_sq <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sigma_sq must be finite and positive, got %g", sigma_sq));
  }
  ProblemInstance copy = *this;
  copy.sigma_sq_ = sigma_sq;
  return copy;
}

bool ProblemInstance::AllCostsIdentical() const {
  return costs_.front() == costs_.back();
}

bool ProblemInstance::IsWellSeparated() const {
  for (size_t i = 1; i < costs_.size(); ++i) {
    if (costs_[i] < 2 * costs_[i - 1]) return false;
  }
  return true;
}

absl::StatusOr<Coalition> Coalition::Create(std::vector<int> members, int n) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    return absl::InvalidArgumentError("Coalition members must be distinct");
  }
  for (int m : members) {
    if (m < 0 || m >= n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Coalition member %d is outside [0, %d)", m, n));
    }
  }
  if (members.size() == 1) {
    return absl::InvalidArgumentError(
        "A non-empty coalition needs at least two members");
  }
  return Coalition(std::move(members));
}

absl::StatusOr<Coalition> Coalition::DownwardClosed(int k, int n) {
  if (k < 0 || k > n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Coalition size %d is outside [0, %d]", k, n));
  }
  std::vector<int> members(k);
  std::iota(members.begin(), members.end(), 0);
  return Create(std::move(members), n);
}

absl::StatusOr<Coalition> Coalition::FromMask(uint64_t mask, int n) {
  if (n < 0 || n > 64 || (n < 64 && (mask >> n) != 0)) {
    return absl::InvalidArgumentError("Mask has bits outside the player set");
  }
  std::vector<int> members;
  for (int i = 0; i < n; ++i) {
    if (mask & (uint64_t{1} << i)) members.push_back(i);
  }
  return Create(std::move(members), n);
}

bool Coalition::Contains(int player) const {
  return std::binary_search(members_.begin(), members_.end(), player);
}

uint64_t Coalition::Mask() const {
  uint64_t mask = 0;
  for (int m : members_) mask |= uint64_t{1} << m;
  return mask;
}

bool operator<(const Coalition& a, const Coalition& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.members_ < b.members_;
}

absl::Status ValidateProfile(const Coalition& coalition,
                             const PrivacyProfile& profile) {
  if (profile.levels.size() != coalition.members().size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Profile has %d levels for a coalition of %d members",
        profile.levels.size(), coalition.size()));
  }
  for (double eps : profile.levels) {
    if (!std::isfinite(eps) || eps <= 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Privacy levels must be finite and positive, got %g", eps));
    }
  }
  return absl::OkStatus();
}

double PrivacyScaling(const ProblemInstance& instance, int k) {
  return std::pow(static_cast<double>(k), instance.alpha());
}

absl::StatusOr<double> EstimatorVariance(const Coalition& coalition,
                                         const PrivacyProfile& profile,
                                         const ProblemInstance& instance) {
  if (coalition.empty()) {
    return absl::InvalidArgumentError("no estimator for empty coalition");
  }
  if (absl::Status s = ValidateProfile(coalition, profile); !s.ok()) return s;
  const double k = coalition.size();
  double inverse_sq_sum = 0;
  for (double eps : profile.levels) inverse_sq_sum += 1.0 / (eps * eps);
  return instance.sigma_sq() / k + 2.0 / (k * k) * inverse_sq_sum;
}

absl::StatusOr<double> PlayerBurden(int player, const Coalition& coalition,
                                    const PrivacyProfile& profile,
                                    const ProblemInstance& instance) {
  if (player < 0 || player >= instance.n()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Player %d is outside [0, %d)", player, instance.n()));
  }
  const auto members = coalition.members();
  const auto it = std::lower_bound(members.begin(), members.end(), player);
  if (it == members.end() || *it != player) return instance.sigma_sq();

  absl::StatusOr<double> variance =
      EstimatorVariance(coalition, profile, instance);
  if (!variance.ok()) return variance.status();
  const double eps = profile.levels[it - members.begin()];
  return *variance +
         instance.cost(player) * PrivacyScaling(instance, coalition.size()) *
             eps;
}

absl::StatusOr<BurdenReport> ComputeBurdens(const Coalition& coalition,
                                            const PrivacyProfile& profile,
                                            const ProblemInstance& instance) {
  BurdenReport report;
  report.per_player_burden.assign(instance.n(), instance.sigma_sq());
  if (coalition.empty()) {
    report.variance = instance.sigma_sq();
    report.social_cost = instance.n() * instance.sigma_sq();
    return report;
  }
  if (coalition.members().back() >= instance.n()) {
    return absl::InvalidArgumentError("Coalition does not fit the instance");
  }
  absl::StatusOr<double> variance =
      EstimatorVariance(coalition, profile, instance);
  if (!variance.ok()) return variance.status();
  report.variance = *variance;
  const double scaling = PrivacyScaling(instance, coalition.size());
  const auto members = coalition.members();
  for (size_t j = 0; j < members.size(); ++j) {
    report.per_player_burden[members[j]] =
        *variance + instance.cost(members[j]) * scaling * profile.levels[j];
  }
  report.social_cost = std::accumulate(report.per_player_burden.begin(),
                                       report.per_player_burden.end(), 0.0);
  return report;
}

absl::StatusOr<double> SocialCost(const Coalition& coalition,
                                  const PrivacyProfile& profile,
                                  const ProblemInstance& instance) {
  absl::StatusOr<BurdenReport> report =
      ComputeBurdens(coalition, profile, instance);
  if (!report.ok()) return report.status();
  return report->social_cost;
}

absl::StatusOr<double> LaplaceSample(double scale, double uniform_draw) {
  if (!(scale > 0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError("Laplace scale must be positive");
  }
  if (!(std::abs(uniform_draw) < 0.5)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Uniform draw must lie in (-0.5, 0.5), got %g", uniform_draw));
  }
  const double sign = uniform_draw < 0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(uniform_draw));
}

}  // namespace coalition_dp
