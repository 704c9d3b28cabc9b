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

#include "coalition_dp/efficiency.h"

#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "absl/strings/str_format.h"

namespace coalition_dp {
namespace {

absl::StatusOr<std::vector<Coalition>> StableCandidates(
    const ProblemInstance& instance, StabilityKind kind,
    const EnumerationOptions& options) {
  const int n = instance.n();
  if (n >= 2 && instance.AllCostsIdentical()) {
    std::vector<Coalition> result;
    if (kind == StabilityKind::kRobust) {
      absl::StatusOr<IdenticalCostReport> report = IdenticalCostAnalysis(
          instance.cost(0), instance.sigma_sq(), instance.alpha(), n);
      if (!report.ok()) return report.status();
      if (report->robust_intermediate_size) {
        result.push_back(
            *Coalition::DownwardClosed(*report->robust_intermediate_size, n));
      }
    }
    if (GrandCoalitionSufficient(instance, options.tol)) {
      result.push_back(*Coalition::DownwardClosed(n, n));
    }
    return result;
  }
  if (kind == StabilityKind::kNash && instance.IsWellSeparated()) {
    return DownwardClosedScan(instance, kind, options.tol);
  }
  if (n <= options.max_n) return EnumerateEquilibria(instance, kind, options);
  return absl::FailedPreconditionError(absl::StrFormat(
      "No exact method for n = %d: costs are neither identical nor "
      "well-separated (Nash) and n exceeds the enumeration cap %d",
      n, options.max_n));
}

absl::StatusOr<StableOptimum> SelectStable(const ProblemInstance& instance,
                                           StabilityKind kind,
                                           const EnumerationOptions& options,
                                           bool by_variance) {
  absl::StatusOr<std::vector<Coalition>> candidates =
      StableCandidates(instance, kind, options);
  if (!candidates.ok()) return candidates.status();

  StableOptimum best;
  best.social_cost = instance.n() * instance.sigma_sq();
  best.variance = instance.sigma_sq();
  bool found = false;
  for (const Coalition& s : *candidates) {
    const double sc = *DecentralSocialCost(s, instance);
    const double var = *DecentralVariance(s, instance);
    const double key = by_variance ? var : sc;
    const double best_key = by_variance ? best.variance : best.social_cost;
    if (!found || key < best_key) {
      best = {.coalition = s, .social_cost = sc, .variance = var};
      found = true;
    }
  }
  return best;
}

}  // namespace

absl::StatusOr<StableOptimum> OptimalStableCoalition(
    const ProblemInstance& instance, StabilityKind kind,
    const EnumerationOptions& options) {
  return SelectStable(instance, kind, options, /*by_variance=*/false);
}

absl::StatusOr<StableOptimum> VarianceOptimalStableCoalition(
    const ProblemInstance& instance, StabilityKind kind,
    const EnumerationOptions& options) {
  return SelectStable(instance, kind, options, /*by_variance=*/true);
}

absl::StatusOr<PosReport> PriceOfStability(const ProblemInstance& instance,
                                           StabilityKind kind,
                                           const PosOptions& options) {
  absl::StatusOr<StableOptimum> decentral =
      OptimalStableCoalition(instance, kind, options.enumeration);
  if (!decentral.ok()) return decentral.status();

  PosReport report;
  report.central_solution = SolveCentralized(instance);
  report.decentral_coalition = decentral->coalition;
  report.pos_sc = decentral->social_cost / report.central_solution.social_cost;
  report.pos_var =
      decentral->variance /
      report.central_solution.variance.value_or(instance.sigma_sq());
  if (instance.alpha() > 0.5) {
    report.bound_high_alpha = *PosBoundHighAlpha(instance);
  }

  if (options.variance_optimal_diagnostic) {
    absl::StatusOr<StableOptimum> by_var =
        VarianceOptimalStableCoalition(instance, kind, options.enumeration);
    if (!by_var.ok()) return by_var.status();
    double central_var = instance.sigma_sq();
    for (int k = 2; k <= instance.n(); ++k) {
      central_var = std::min(central_var, *CentralVarianceAtSize(instance, k));
    }
    report.pos_var_variance_optimal = by_var->variance / central_var;
  }
  return report;
}

absl::StatusOr<double> PosBoundHighAlpha(const ProblemInstance& instance) {
  if (!(instance.alpha() > 0.5)) {
    return absl::InvalidArgumentError("bound applies only for α > 1/2");
  }
  const double c_min = instance.cost(0);
  return std::max(4.0 / 3.0, std::cbrt(2.0) * instance.sigma_sq() /
                                 (3.0 * std::cbrt(c_min * c_min)));
}

absl::StatusOr<ScalingParameters> CalibrateScalingParameters(
    double alpha, std::span<const int> n_grid) {
  if (n_grid.empty()) return absl::InvalidArgumentError("Empty n grid");
  for (int n : n_grid) {
    if (n < 2) return absl::InvalidArgumentError("Grid sizes must be >= 2");
  }
  if (alpha < -1 || alpha > 1) {
    return absl::InvalidArgumentError("alpha must lie in [-1, 1]");
  }

  constexpr double kCost = 1.0;
  // Monotone in sigma^2: larger data variance only makes pooling more
  // attractive.
  auto regime_holds = [&](double sigma_sq) {
    for (int n : n_grid) {
      const ProblemInstance instance =
          *ProblemInstance::Create(std::vector<double>(n, kCost), sigma_sq,
                                   alpha);
      const int k_star = SolveCentralized(instance).k_star;
      if (alpha >= 0.5) {
        if (k_star < 2) return false;
        continue;
      }
      if (k_star != n) return false;
      if (alpha <= -0.5 && !GrandCoalitionSufficient(instance)) return false;
    }
    return true;
  };

  double lo = std::log(1e-8), hi = std::log(1e8);
  if (!regime_holds(std::exp(hi))) {
    return absl::FailedPreconditionError(
        "No data variance puts this grid in the asymptotic regime");
  }
  for (int iter = 0; iter < 100 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (regime_holds(std::exp(mid)) ? hi : lo) = mid;
  }
  return ScalingParameters{.cost = kCost, .sigma_sq = 1.05 * std::exp(hi)};
}

absl::StatusOr<LogLogFit> PosVarianceExponentCheck(double alpha,
                                                   std::span<const int> n_grid,
                                                   StabilityKind kind) {
  if (std::set<int>(n_grid.begin(), n_grid.end()).size() < 2) {
    return absl::InvalidArgumentError(
        "Degenerate grid: need at least two distinct sizes");
  }
  absl::StatusOr<ScalingParameters> params =
      CalibrateScalingParameters(alpha, n_grid);
  if (!params.ok()) return params.status();

  std::vector<double> ns, pos_var;
  for (int n : n_grid) {
    absl::StatusOr<ProblemInstance> instance = ProblemInstance::Create(
        std::vector<double>(n, params->cost), params->sigma_sq, alpha);
    if (!instance.ok()) return instance.status();
    absl::StatusOr<PosReport> report = PriceOfStability(*instance, kind);
    if (!report.ok()) return report.status();
    ns.push_back(n);
    pos_var.push_back(report->pos_var);
  }
  return FitLogLog(ns, pos_var);
}

}  // namespace coalition_dp
