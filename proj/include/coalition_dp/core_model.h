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

// Primitive quantities of the private data-sharing game: the pooled mean
// estimator's variance, each player's burden, the privacy-cost scaling
// f(k) = k^alpha, and social cost.
//
// Player indices are 0-based throughout the library. Player i is always the
// player with the i-th smallest cost; the original position of each cost in
// the caller's input is kept as its label.

#ifndef COALITION_DP_CORE_MODEL_H_
#define COALITION_DP_CORE_MODEL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace coalition_dp {

// Numeric slack used when deciding the model's inequalities at real-valued
// boundaries.
struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
};

absl::Status ValidateTolerance(const Tolerance& tol);

// Outcome of a toleranced comparison. `near_boundary` is set when the two
// sides are within tolerance of each other, i.e. the decision could flip
// under rounding.
struct Comparison {
  bool holds = false;
  bool near_boundary = false;
};

// lhs >= rhs, accepted when lhs - rhs >= -(abs_tol + rel_tol * |rhs|).
Comparison GreaterOrEqual(double lhs, double rhs, const Tolerance& tol);
// lhs < rhs, accepted only when rhs - lhs > abs_tol + rel_tol * |lhs|.
Comparison StrictlyLess(double lhs, double rhs, const Tolerance& tol);

// The game parameterization: n players with ascending privacy costs, the
// data variance sigma^2 and the exponent alpha of f(k) = k^alpha.
class ProblemInstance {
 public:
  // Sorts `costs` ascending; labels()[i] is the input position of the cost now
  // at index i. Fails on an empty cost vector, non-positive or non-finite
  // costs, sigma_sq <= 0 or alpha outside [-1, 1].
  static absl::StatusOr<ProblemInstance> Create(std::vector<double> costs,
                                                double sigma_sq, double alpha);

  int n() const { return static_cast<int>(costs_.size()); }
  std::span<const double> costs() const { return costs_; }
  double cost(int i) const { return costs_[i]; }
  std::span<const int> labels() const { return labels_; }
  double sigma_sq() const { return sigma_sq_; }
  double alpha() const { return alpha_; }

  // Same costs and alpha with a different data variance.
  absl::StatusOr<ProblemInstance> WithSigmaSq(double sigma_sq) const;

  bool AllCostsIdentical() const;
  // c_i >= 2 c_{i-1} for every i >= 1.
  bool IsWellSeparated() const;

  friend bool operator==(const ProblemInstance&,
                         const ProblemInstance&) = default;

 private:
  ProblemInstance(std::vector<double> costs, std::vector<int> labels,
                  double sigma_sq, double alpha)
      : costs_(std::move(costs)),
        labels_(std::move(labels)),
        sigma_sq_(sigma_sq),
        alpha_(alpha) {}

  std::vector<double> costs_;
  std::vector<int> labels_;
  double sigma_sq_;
  double alpha_;
};

// A set of distinct player indices, either empty or of size at least two.
class Coalition {
 public:
  Coalition() = default;

  // `members` may be unsorted; duplicates, indices outside [0, n) and
  // singleton sets are rejected.
  static absl::StatusOr<Coalition> Create(std::vector<int> members, int n);
  // Players with the k smallest costs, {0, ..., k-1}; k must be 0 or >= 2.
  static absl::StatusOr<Coalition> DownwardClosed(int k, int n);
  static absl::StatusOr<Coalition> FromMask(uint64_t mask, int n);

  std::span<const int> members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool Contains(int player) const;
  uint64_t Mask() const;

  friend bool operator==(const Coalition&, const Coalition&) = default;
  // Orders by size first, then lexicographically by members.
  friend bool operator<(const Coalition& a, const Coalition& b);

 private:
  explicit Coalition(std::vector<int> members)
      : members_(std::move(members)) {}

  std::vector<int> members_;
};

// Privacy levels of a coalition's members: levels[j] is the epsilon of
// coalition.members()[j].
struct PrivacyProfile {
  std::vector<double> levels;
};

absl::Status ValidateProfile(const Coalition& coalition,
                             const PrivacyProfile& profile);

struct BurdenReport {
  std::vector<double> per_player_burden;  // size n
  double variance = 0.0;                  // estimator variance for members
  double social_cost = 0.0;
};

// f(k) = k^alpha.
double PrivacyScaling(const ProblemInstance& instance, int k);

// sigma^2/|S| + (2/|S|^2) * sum_{i in S} 1/eps_i^2.
absl::StatusOr<double> EstimatorVariance(const Coalition& coalition,
                                         const PrivacyProfile& profile,
                                         const ProblemInstance& instance);

// Members pay the estimator variance plus c_i f(|S|) eps_i; everyone else
// keeps their own data point and pays sigma^2.
absl::StatusOr<double> PlayerBurden(int player, const Coalition& coalition,
                                    const PrivacyProfile& profile,
                                    const ProblemInstance& instance);

// Sum of all n burdens; n * sigma^2 for the empty coalition.
absl::StatusOr<double> SocialCost(const Coalition& coalition,
                                  const PrivacyProfile& profile,
                                  const ProblemInstance& instance);

absl::StatusOr<BurdenReport> ComputeBurdens(const Coalition& coalition,
                                            const PrivacyProfile& profile,
                                            const ProblemInstance& instance);

// Inverse-CDF draw from Laplace(0, scale) for u in (-0.5, 0.5):
// -scale * sign(u) * ln(1 - 2|u|).
absl::StatusOr<double> LaplaceSample(double scale, double uniform_draw);

}  // namespace coalition_dp

#endif  // COALITION_DP_CORE_MODEL_H_
