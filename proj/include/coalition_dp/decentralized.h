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

// Selfish coalition formation. Every member of a coalition S picks the
// privacy level minimizing its own burden, which depends only on its cost and
// |S|. Stability comes in two flavours:
//
//   * Nash: no member gains by leaving, and no outsider gains by joining while
//     the members keep their current privacy levels.
//   * Robust: same exit rule, but an outsider may only join if, after every
//     member re-optimizes for the larger coalition, nobody wants to leave.
//
// Each is available as a closed-form predicate (fast, used by the searches)
// and as a direct evaluation of the definition (slow, used as an oracle).
//
// Throughout, b_j = (c_j^2 / 2)^{1/3} and beta = (2 alpha + 1) / 3.

#ifndef COALITION_DP_DECENTRALIZED_H_
#define COALITION_DP_DECENTRALIZED_H_

#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "coalition_dp/core_model.h"

namespace coalition_dp {

enum class StabilityKind { kNash, kRobust };

const char* StabilityKindName(StabilityKind kind);
absl::StatusOr<StabilityKind> ParseStabilityKind(std::string_view name);

// An outsider whose entry goes through. `slack` is the post-entry burden
// minus sigma^2 of the joiner (Nash) or of the worst-off member of the
// enlarged coalition (robust); it is <= 0 (up to tolerance) for a witness.
struct EntryWitness {
  int player = -1;
  double slack = 0.0;
};

struct StabilityVerdict {
  StabilityKind kind = StabilityKind::kNash;
  bool stable = false;
  // min over members of sigma^2 - burden; negative means someone leaves.
  double exit_slack = 0.0;
  std::optional<EntryWitness> entry_witness;
  // A deciding comparison fell within tolerance.
  bool boundary_flag = false;
};

// (4 / (k^{2+alpha} c))^{1/3}.
double BestResponseEpsilon(double cost, int k, double alpha);

PrivacyProfile BestResponseProfile(const Coalition& coalition,
                                   const ProblemInstance& instance);

// Variance and social cost at the best-response profile, from their closed
// forms in |S| and sum_{i in S} c_i^{2/3}. Require |S| >= 2.
absl::StatusOr<double> DecentralVariance(const Coalition& coalition,
                                         const ProblemInstance& instance);
absl::StatusOr<double> DecentralSocialCost(const Coalition& coalition,
                                           const ProblemInstance& instance);

// Burdens at the best-response profile; `variance` and `social_cost` come
// from the closed forms above.
absl::StatusOr<BurdenReport> DecentralizedReport(
    const Coalition& coalition, const ProblemInstance& instance);

absl::StatusOr<StabilityVerdict> NashStableClosedForm(
    const Coalition& coalition, const ProblemInstance& instance,
    const Tolerance& tol = {});
absl::StatusOr<StabilityVerdict> RobustStableClosedForm(
    const Coalition& coalition, const ProblemInstance& instance,
    const Tolerance& tol = {});
absl::StatusOr<StabilityVerdict> StableClosedForm(
    const Coalition& coalition, const ProblemInstance& instance,
    StabilityKind kind, const Tolerance& tol = {});

// Evaluates the stability definitions directly from burdens: every outsider
// is tried, and robust entry re-solves the enlarged coalition's profile.
absl::StatusOr<StabilityVerdict> StabilityByDefinition(
    const Coalition& coalition, const ProblemInstance& instance,
    StabilityKind kind, const Tolerance& tol = {});

struct EnumerationOptions {
  int max_n = 20;
  Tolerance tol;
  // 0 picks std::thread::hardware_concurrency().
  int threads = 0;
};

// Every stable coalition of size >= 2, ordered by size then members. The
// result does not depend on the thread count.
absl::StatusOr<std::vector<Coalition>> EnumerateEquilibria(
    const ProblemInstance& instance, StabilityKind kind,
    const EnumerationOptions& options = {});

// Stable coalitions among S_2, ..., S_n (the k cheapest players). For Nash on
// well-separated costs this is every equilibrium; for robust its largest
// entry has the maximum equilibrium size. Nash mode refuses other costs.
absl::StatusOr<std::vector<Coalition>> DownwardClosedScan(
    const ProblemInstance& instance, StabilityKind kind,
    const Tolerance& tol = {});

// Exact exit condition of the grand coalition, which is its whole stability
// requirement under both kinds.
bool GrandCoalitionSufficient(const ProblemInstance& instance,
                              const Tolerance& tol = {});

// Diagnostic only: the sufficient bound on n under which the grand coalition
// is stable. An upper bound when alpha > -1/2, a lower bound when
// alpha < -1/2; undefined at alpha = -1/2.
struct GrandSizeBound {
  bool is_upper_bound = false;
  double bound = 0.0;
};
absl::StatusOr<GrandSizeBound> GrandCoalitionSizeBound(
    const ProblemInstance& instance);

// One link of the chain S_0 = start, S_{i+1} = S_i plus its cheapest
// outsider. S_i is robust-stable exactly for sigma^2 in
// [threshold_T, next_threshold_T); `feasible` says that range is non-empty.
struct EscalationStep {
  Coalition coalition;
  double threshold_T = 0.0;
  double next_threshold_T = 0.0;  // +inf for the grand coalition
  bool feasible = false;
};

// Fails when `start` is robust-stable at no sigma^2.
absl::StatusOr<std::vector<EscalationStep>> RobustEscalationSequence(
    const Coalition& start, const ProblemInstance& instance);

struct IdenticalCostReport {
  bool nash_intermediate_exists = false;
  std::optional<int> robust_intermediate_size;
  bool grand_stable = false;
};

// Equilibrium structure when all n players share the cost c.
absl::StatusOr<IdenticalCostReport> IdenticalCostAnalysis(double cost,
                                                          double sigma_sq,
                                                          double alpha, int n);

}  // namespace coalition_dp

#endif  // COALITION_DP_DECENTRALIZED_H_
