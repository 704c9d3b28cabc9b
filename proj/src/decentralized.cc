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

#include "coalition_dp/decentralized.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <thread>

#include "absl/strings/str_format.h"

namespace coalition_dp {
namespace {

const double kCubeRootTwo = std::cbrt(2.0);

double HalfSquareCubeRoot(double cost) { return std::cbrt(cost * cost / 2.0); }

absl::Status CheckNonTrivial(const Coalition& coalition,
                             const ProblemInstance& instance) {
  if (coalition.size() < 2) {
    return absl::InvalidArgumentError(
        "Stability is only defined for coalitions of size >= 2");
  }
  if (coalition.members().back() >= instance.n()) {
    return absl::InvalidArgumentError("Coalition does not fit the instance");
  }
  return absl::OkStatus();
}

// Aggregates of a coalition that the closed-form conditions depend on.
struct CoalitionSummary {
  int k = 0;
  double sum_b = 0.0;
  double max_b = 0.0;
  int cheapest_outsider = -1;  // -1 for the grand coalition
};

// Per-size powers are cached so that enumeration only pays for the sums.
class ClosedFormEvaluator {
 public:
  ClosedFormEvaluator(const ProblemInstance& instance, const Tolerance& tol)
      : n_(instance.n()),
        sigma_sq_(instance.sigma_sq()),
        alpha_(instance.alpha()),
        tol_(tol),
        b_(instance.n()) {
    for (int i = 0; i < n_; ++i) b_[i] = HalfSquareCubeRoot(instance.cost(i));
    const double beta = (2.0 * alpha_ + 1.0) / 3.0;
    const double gamma = (2.0 * alpha_ + 4.0) / 3.0;
    k_pow_beta_.resize(n_ + 2);
    k_pow_gamma_.resize(n_ + 2);
    for (int k = 1; k <= n_ + 1; ++k) {
      k_pow_beta_[k] = std::pow(static_cast<double>(k), beta);
      k_pow_gamma_[k] = std::pow(static_cast<double>(k), gamma);
    }
  }

  double b(int i) const { return b_[i]; }

  CoalitionSummary Summarize(const Coalition& coalition) const {
    CoalitionSummary s;
    s.k = coalition.size();
    int expected = 0;
    for (int m : coalition.members()) {
      s.sum_b += b_[m];
      s.max_b = std::max(s.max_b, b_[m]);
      if (s.cheapest_outsider < 0 && m != expected) {
        s.cheapest_outsider = expected;
      }
      ++expected;
    }
    if (s.cheapest_outsider < 0 && s.k < n_) s.cheapest_outsider = s.k;
    return s;
  }

  CoalitionSummary Summarize(uint64_t mask) const {
    CoalitionSummary s;
    s.k = std::popcount(mask);
    for (uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      const int m = std::countr_zero(rest);
      s.sum_b += b_[m];
      s.max_b = std::max(s.max_b, b_[m]);
    }
    const int first_out = std::countr_zero(~mask);
    s.cheapest_outsider = first_out < n_ ? first_out : -1;
    return s;
  }

  StabilityVerdict Evaluate(const CoalitionSummary& s,
                            StabilityKind kind) const {
    const double k = s.k;
    StabilityVerdict verdict;
  verdict.kind = kind;

    // (k-1)/k^beta >= (sum_b + 2 max_b) / sigma^2
    const Comparison exit =
        GreaterOrEqual((k - 1) / k_pow_beta_[s.k],
                       (s.sum_b + 2 * s.max_b) / sigma_sq_, tol_);
    verdict.exit_slack = sigma_sq_ * (k - 1) / k -
                         k_pow_beta_[s.k] / k * (s.sum_b + 2 * s.max_b);
    verdict.boundary_flag = exit.near_boundary;
    if (s.cheapest_outsider < 0) {
      verdict.stable = exit.holds;
      return verdict;
    }

    const int l = s.cheapest_outsider;
    const double bl = b_[l];
    Comparison entry_blocked;
    double entry_slack;
    if (kind == StabilityKind::kNash) {
      // k(k+1) < 3 b_l (k+1)^gamma / sigma^2 + sum_b k^gamma / sigma^2
      entry_blocked = StrictlyLess(
          k * (k + 1),
          3 * bl / sigma_sq_ * k_pow_gamma_[s.k + 1] +
              s.sum_b / sigma_sq_ * k_pow_gamma_[s.k],
          tol_);
      entry_slack = (k_pow_gamma_[s.k] * s.sum_b +
                     3 * bl * k_pow_gamma_[s.k + 1]) /
                        ((k + 1) * (k + 1)) -
                    sigma_sq_ * k / (k + 1);
    } else {
      // k/(k+1)^beta < min_l f(S + l) / sigma^2, attained at the cheapest
      // outsider since f(S + l) is nondecreasing in b_l.
      const double f = s.sum_b + bl + 2 * std::max(s.max_b, bl);
      entry_blocked =
          StrictlyLess(k / k_pow_beta_[s.k + 1], f / sigma_sq_, tol_);
      entry_slack = k_pow_beta_[s.k + 1] / (k + 1) * f - sigma_sq_ * k / (k + 1);
    }
    if (exit.holds) verdict.boundary_flag |= entry_blocked.near_boundary;
    if (!entry_blocked.holds) {
      verdict.entry_witness = EntryWitness{.player = l, .slack = entry_slack};
    }
    verdict.stable = exit.holds && entry_blocked.holds;
    return verdict;
  }

  // Lower-bound threshold sigma^2 >= f(S) |S|^beta / (|S| - 1) of the exit
  // condition.
  double ExitThreshold(const CoalitionSummary& s) const {
    return (s.sum_b + 2 * s.max_b) * k_pow_beta_[s.k] / (s.k - 1);
  }

 private:
  int n_;
  double sigma_sq_;
  double alpha_;
  Tolerance tol_;
  std::vector<double> b_;
  std::vector<double> k_pow_beta_;
  std::vector<double> k_pow_gamma_;
};

Coalition WithMember(const Coalition& coalition, int player, int n) {
  std::vector<int> members(coalition.members().begin(),
                           coalition.members().end());
  members.push_back(player);
  return *Coalition::Create(std::move(members), n);
}

}  // namespace

const char* StabilityKindName(StabilityKind kind) {
  return kind == StabilityKind::kNash ? "nash" : "robust";
}

absl::StatusOr<StabilityKind> ParseStabilityKind(std::string_view name) {
  if (name == "nash") return StabilityKind::kNash;
  if (name == "robust") return StabilityKind::kRobust;
  return absl::InvalidArgumentError(absl::StrFormat(
      "Unknown stability kind '%s'; expected nash or robust",
      std::string(name)));
}

double BestResponseEpsilon(double cost, int k, double alpha) {
  return std::cbrt(4.0 / (std::pow(static_cast<double>(k), 2.0 + alpha) * cost));
}

PrivacyProfile BestResponseProfile(const Coalition& coalition,
                                   const ProblemInstance& instance) {
  PrivacyProfile profile;
  profile.levels.reserve(coalition.size());
  for (int m : coalition.members()) {
    profile.levels.push_back(
        BestResponseEpsilon(instance.cost(m), coalition.size(), instance.alpha()));
  }
  return profile;
}

absl::StatusOr<double> DecentralVariance(const Coalition& coalition,
                                         const ProblemInstance& instance) {
  if (absl::Status s = CheckNonTrivial(coalition, instance); !s.ok()) return s;
  const double k = coalition.size();
  double sum = 0;
  for (int m : coalition.members()) {
    sum += std::cbrt(instance.cost(m) * instance.cost(m));
  }
  return (instance.sigma_sq() +
          std::pow(k, 2.0 * (instance.alpha() + 2.0) / 3.0) / kCubeRootTwo *
              (sum / k)) /
         k;
}

absl::StatusOr<double> DecentralSocialCost(const Coalition& coalition,
                                           const ProblemInstance& instance) {
  if (absl::Status s = CheckNonTrivial(coalition, instance); !s.ok()) return s;
  const double k = coalition.size();
  double sum = 0;
  for (int m : coalition.members()) {
    sum += std::cbrt(instance.cost(m) * instance.cost(m));
  }
  const double sigma_sq = instance.sigma_sq();
  return (instance.n() + 1) * sigma_sq -
         (k * sigma_sq - 1.0 / kCubeRootTwo * (k + 2) *
                             std::pow(k, (2.0 * instance.alpha() + 1.0) / 3.0) *
                             (sum / k));
}

absl::StatusOr<BurdenReport> DecentralizedReport(
    const Coalition& coalition, const ProblemInstance& instance) {
  if (absl::Status s = CheckNonTrivial(coalition, instance); !s.ok()) return s;
  absl::StatusOr<BurdenReport> report = ComputeBurdens(
      coalition, BestResponseProfile(coalition, instance), instance);
  if (!report.ok()) return report.status();
  report->variance = *DecentralVariance(coalition, instance);
  report->social_cost = *DecentralSocialCost(coalition, instance);
  return report;
}

absl::StatusOr<StabilityVerdict> StableClosedForm(
    const Coalition& coalition, const ProblemInstance& instance,
    StabilityKind kind, const Tolerance& tol) {
  if (absl::Status s = CheckNonTrivial(coalition, instance); !s.ok()) return s;
  if (absl::Status s = ValidateTolerance(tol); !s.ok()) return s;
  const ClosedFormEvaluator evaluator(instance, tol);
  return evaluator.Evaluate(evaluator.Summarize(coalition), kind);
}

absl::StatusOr<StabilityVerdict> NashStableClosedForm(
    const Coalition& coalition, const ProblemInstance& instance,
    const Tolerance& tol) {
  return StableClosedForm(coalition, instance, StabilityKind::kNash, tol);
}

absl::StatusOr<StabilityVerdict> RobustStableClosedForm(
    const Coalition& coalition, const ProblemInstance& instance,
    const Tolerance& tol) {
  return StableClosedForm(coalition, instance, StabilityKind::kRobust, tol);
}

absl::StatusOr<StabilityVerdict> StabilityByDefinition(
    const Coalition& coalition, const ProblemInstance& instance,
    StabilityKind kind, const Tolerance& tol) {
  if (absl::Status s = CheckNonTrivial(coalition, instance); !s.ok()) return s;
  if (absl::Status s = ValidateTolerance(tol); !s.ok()) return s;
  const double sigma_sq = instance.sigma_sq();
  const int n = instance.n();
  const int k = coalition.size();

  StabilityVerdict verdict;
  verdict.kind = kind;
  const PrivacyProfile profile = BestResponseProfile(coalition, instance);
  absl::StatusOr<BurdenReport> burdens =
      ComputeBurdens(coalition, profile, instance);
  if (!burdens.ok()) return burdens.status();

  // No member wants to leave: B_j <= sigma^2.
  bool exit_ok = true;
  verdict.exit_slack = std::numeric_limits<double>::infinity();
  for (int m : coalition.members()) {
    const double burden = burdens->per_player_burden[m];
    const Comparison c = GreaterOrEqual(sigma_sq, burden, tol);
    exit_ok &= c.holds;
    verdict.boundary_flag |= c.near_boundary;
    verdict.exit_slack = std::min(verdict.exit_slack, sigma_sq - burden);
  }

  bool entry_ok = true;
  bool entry_near = false;
  for (int l = 0; l < n; ++l) {
    if (coalition.Contains(l)) continue;
    const Coalition enlarged = WithMember(coalition, l, n);
    double slack;
    Comparison blocked;
    if (kind == StabilityKind::kNash) {
      // Members keep their levels; the joiner best-responds at size k + 1.
      PrivacyProfile frozen;
      for (int m : enlarged.members()) {
        frozen.levels.push_back(
            m == l ? BestResponseEpsilon(instance.cost(l), k + 1,
                                         instance.alpha())
                   : profile.levels[std::lower_bound(
                                        coalition.members().begin(),
                                        coalition.members().end(), m) -
                                    coalition.members().begin()]);
      }
      absl::StatusOr<double> joiner =
          PlayerBurden(l, enlarged, frozen, instance);
      if (!joiner.ok()) return joiner.status();
      slack = *joiner - sigma_sq;
      blocked = StrictlyLess(sigma_sq, *joiner, tol);
    } else {
      // Everyone re-optimizes; the entry is vetoed if anyone then leaves.
      absl::StatusOr<BurdenReport> after = ComputeBurdens(
          enlarged, BestResponseProfile(enlarged, instance), instance);
      if (!after.ok()) return after.status();
      double worst = -std::numeric_limits<double>::infinity();
      for (int m : enlarged.members()) {
        worst = std::max(worst, after->per_player_burden[m]);
      }
      slack = worst - sigma_sq;
      blocked = StrictlyLess(sigma_sq, worst, tol);
    }
    entry_near |= blocked.near_boundary;
    if (!blocked.holds) {
      entry_ok = false;
      if (!verdict.entry_witness || slack < verdict.entry_witness->slack) {
        verdict.entry_witness = EntryWitness{.player = l, .slack = slack};
      }
    }
  }
  if (exit_ok) verdict.boundary_flag |= entry_near;
  verdict.stable = exit_ok && entry_ok;
  return verdict;
}

absl::StatusOr<std::vector<Coalition>> EnumerateEquilibria(
    const ProblemInstance& instance, StabilityKind kind,
    const EnumerationOptions& options) {
  const int n = instance.n();
  if (n > options.max_n) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "Exhaustive enumeration is capped at n = %d (got n = %d); use "
        "DownwardClosedScan for larger instances",
        options.max_n, n));
  }
  if (n > 40) {
    return absl::FailedPreconditionError(
        "Exhaustive enumeration supports at most 40 players");
  }
  if (absl::Status s = ValidateTolerance(options.tol); !s.ok()) return s;

  const ClosedFormEvaluator evaluator(instance, options.tol);
  const uint64_t total = uint64_t{1} << n;
  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp<int>(threads, 1, n >= 12 ? 64 : 1);

  // Each worker owns a contiguous mask range, so concatenating the per-worker
  // results before the final sort is deterministic.
  std::vector<std::vector<uint64_t>> found(threads);
  auto work = [&](int t) {
    const uint64_t begin = total / threads * t;
    const uint64_t end = t + 1 == threads ? total : total / threads * (t + 1);
    for (uint64_t mask = begin; mask < end; ++mask) {
      if (std::popcount(mask) < 2) continue;
      if (evaluator.Evaluate(evaluator.Summarize(mask), kind).stable) {
        found[t].push_back(mask);
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  std::vector<Coalition> result;
  for (const auto& chunk : found) {
    for (uint64_t mask : chunk) result.push_back(*Coalition::FromMask(mask, n));
  }
  std::sort(result.begin(), result.end());
  return result;
}

absl::StatusOr<std::vector<Coalition>> DownwardClosedScan(
    const ProblemInstance& instance, StabilityKind kind, const Tolerance& tol) {
  if (kind == StabilityKind::kNash && !instance.IsWellSeparated()) {
    return absl::FailedPreconditionError(
        "completeness guarantee requires well-separated costs");
  }
  if (absl::Status s = ValidateTolerance(tol); !s.ok()) return s;
  const ClosedFormEvaluator evaluator(instance, tol);
  std::vector<Coalition> result;
  CoalitionSummary s;
  s.sum_b = evaluator.b(0);
  s.max_b = evaluator.b(0);
  for (int k = 2; k <= instance.n(); ++k) {
    s.k = k;
    s.sum_b += evaluator.b(k - 1);
    s.max_b = std::max(s.max_b, evaluator.b(k - 1));
    s.cheapest_outsider = k < instance.n() ? k : -1;
    if (evaluator.Evaluate(s, kind).stable) {
      result.push_back(*Coalition::DownwardClosed(k, instance.n()));
    }
  }
  return result;
}

bool GrandCoalitionSufficient(const ProblemInstance& instance,
                              const Tolerance& tol) {
  if (instance.n() < 2) return false;
  const ClosedFormEvaluator evaluator(instance, tol);
  const Coalition grand = *Coalition::DownwardClosed(instance.n(), instance.n());
  return evaluator.Evaluate(evaluator.Summarize(grand), StabilityKind::kNash)
      .stable;
}

absl::StatusOr<GrandSizeBound> GrandCoalitionSizeBound(
    const ProblemInstance& instance) {
  const double alpha = instance.alpha();
  if (alpha == -0.5) {
    return absl::InvalidArgumentError(
        "The grand-coalition size bound is undefined at alpha = -1/2");
  }
  const double b_max = HalfSquareCubeRoot(instance.costs().back());
  const double exponent = 3.0 / (2.0 * alpha + 1.0);
  if (alpha > -0.5) {
    return GrandSizeBound{
        .is_upper_bound = true,
        .bound = std::pow(instance.sigma_sq() / (4 * b_max), exponent)};
  }
  return GrandSizeBound{
      .is_upper_bound = false,
      .bound = std::max(2.0, std::pow(4 * b_max / instance.sigma_sq(), -exponent))};
}

absl::StatusOr<std::vector<EscalationStep>> RobustEscalationSequence(
    const Coalition& start, const ProblemInstance& instance) {
  if (absl::Status s = CheckNonTrivial(start, instance); !s.ok()) return s;
  const int n = instance.n();
  const ClosedFormEvaluator evaluator(instance, Tolerance{});

  std::vector<EscalationStep> steps;
  Coalition current = start;
  while (true) {
    const CoalitionSummary summary = evaluator.Summarize(current);
    steps.push_back({.coalition = current,
                     .threshold_T = evaluator.ExitThreshold(summary)});
    // The argmin of f(S + l) over outsiders is the cheapest outsider.
    if (summary.cheapest_outsider < 0) break;
    current = WithMember(current, summary.cheapest_outsider, n);
  }
  for (size_t i = 0; i < steps.size(); ++i) {
    steps[i].next_threshold_T = i + 1 < steps.size()
                                    ? steps[i + 1].threshold_T
                                    : std::numeric_limits<double>::infinity();
    steps[i].feasible = steps[i].threshold_T < steps[i].next_threshold_T;
  }
  if (!steps.front().feasible) {
    return absl::FailedPreconditionError(
        "Start coalition is robust-stable at no sigma^2");
  }
  return steps;
}

absl::StatusOr<IdenticalCostReport> IdenticalCostAnalysis(double cost,
                                                          double sigma_sq,
                                                          double alpha, int n) {
  if (n < 2) {
    return absl::InvalidArgumentError("Identical-cost analysis needs n >= 2");
  }
  absl::StatusOr<ProblemInstance> instance =
      ProblemInstance::Create(std::vector<double>(n, cost), sigma_sq, alpha);
  if (!instance.ok()) return instance.status();

  IdenticalCostReport report;
  report.grand_stable = GrandCoalitionSufficient(*instance);
  if (alpha <= -0.5) return report;

  // Size k is a robust equilibrium iff
  //   (k+2)/(k-1) k^beta <= 2^{1/3} sigma^2 / c^{2/3} < (k+3)/k (k+1)^beta.
  // The upper end for k is the lower end for k + 1, so the admissible ranges
  // are disjoint.
  const double ratio = kCubeRootTwo * sigma_sq / std::cbrt(cost * cost);
  const double beta = (2.0 * alpha + 1.0) / 3.0;
  for (int k = 2; k < n; ++k) {
    const double kd = k;
    const double lower = (kd + 2) / (kd - 1) * std::pow(kd, beta);
    const double upper = (kd + 3) / kd * std::pow(kd + 1, beta);
    if (lower <= ratio && ratio < upper) {
      report.robust_intermediate_size = k;
      break;
    }
  }
  return report;
}

}  // namespace coalition_dp
