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

// Reference computations for tests. Everything here is derived directly from
// the burden model with numeric minimization, without the library's closed
// forms.

#ifndef COALITION_DP_TESTS_TEST_ORACLES_H_
#define COALITION_DP_TESTS_TEST_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "boost/math/tools/minima.hpp"

namespace coalition_dp::oracle {

struct Game {
  std::vector<double> costs;  // any order
  double sigma_sq = 1.0;
  double alpha = 0.0;
};

// Burden of every player when `members` pool data with levels `eps`.
inline std::vector<double> Burdens(const Game& g,
                                   const std::vector<int>& members,
                                   const std::vector<double>& eps) {
  const int n = static_cast<int>(g.costs.size());
  std::vector<double> burdens(n, g.sigma_sq);
  if (members.empty()) return burdens;
  const double k = static_cast<double>(members.size());
  double noise = 0;
  for (double e : eps) noise += 2.0 / (e * e);
  const double variance = g.sigma_sq / k + noise / (k * k);
  for (size_t j = 0; j < members.size(); ++j) {
    burdens[members[j]] =
        variance + g.costs[members[j]] * std::pow(k, g.alpha) * eps[j];
  }
  return burdens;
}

inline double Sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

// argmin over eps > 0 of a / eps^2 + b * eps, found numerically.
inline double MinimizeInverseSquarePlusLinear(double a, double b) {
  auto f = [a, b](double log_eps) {
    const double e = std::exp(log_eps);
    return a / (e * e) + b * e;
  };
  const auto [x, fx] =
      boost::math::tools::brent_find_minima(f, -40.0, 40.0, 60);
  (void)fx;
  return std::exp(x);
}

// A member's own best level: only 2/(k^2 eps^2) + c k^alpha eps depends on it.
inline double SelfishEps(const Game& g, int player, int k) {
  const double kd = k;
  return MinimizeInverseSquarePlusLinear(
      2.0 / (kd * kd), g.costs[player] * std::pow(kd, g.alpha));
}

// A designer's level for one member: the member's share of social cost,
// k * 2 / (k^2 eps^2) + c k^alpha eps.
inline double DesignerEps(const Game& g, int player, int k) {
  const double kd = k;
  return MinimizeInverseSquarePlusLinear(
      2.0 / kd, g.costs[player] * std::pow(kd, g.alpha));
}

inline std::vector<double> SelfishProfile(const Game& g,
                                          const std::vector<int>& members) {
  std::vector<double> eps;
  for (int m : members) {
    eps.push_back(SelfishEps(g, m, static_cast<int>(members.size())));
  }
  return eps;
}

inline std::vector<int> MaskMembers(uint64_t mask, int n) {
  std::vector<int> members;
  for (int i = 0; i < n; ++i) {
    if (mask >> i & 1) members.push_back(i);
  }
  return members;
}

// Best social cost over every subset (the empty set included), with the
// minimizing mask. Designer levels per member.
inline std::pair<double, uint64_t> BruteForceCentral(const Game& g) {
  const int n = static_cast<int>(g.costs.size());
  double best = n * g.sigma_sq;
  uint64_t best_mask = 0;
  for (uint64_t mask = 1; mask < (uint64_t{1} << n); ++mask) {
    const std::vector<int> members = MaskMembers(mask, n);
    if (members.size() < 2) continue;
    std::vector<double> eps;
    for (int m : members) {
      eps.push_back(DesignerEps(g, m, static_cast<int>(members.size())));
    }
    const double sc = Sum(Burdens(g, members, eps));
    if (sc < best) {
      best = sc;
      best_mask = mask;
    }
  }
  return {best, best_mask};
}

enum class Kind { kNash, kRobust };

// Stability straight from the definitions with numerically optimized levels.
// `margin` is how far the deciding comparison was from flipping.
struct Decision {
  bool stable = false;
  double margin = std::numeric_limits<double>::infinity();
};

inline Decision Stability(const Game& g, uint64_t mask, Kind kind) {
  const int n = static_cast<int>(g.costs.size());
  const std::vector<int> members = MaskMembers(mask, n);
  const int k = static_cast<int>(members.size());
  const std::vector<double> eps = SelfishProfile(g, members);
  const std::vector<double> burdens = Burdens(g, members, eps);
  Decision d;
  d.stable = true;
  for (int m : members) {
    d.margin = std::min(d.margin, std::abs(burdens[m] - g.sigma_sq));
    if (burdens[m] > g.sigma_sq) d.stable = false;
  }
  for (int l = 0; l < n; ++l) {
    if (mask >> l & 1) continue;
    const std::vector<int> bigger = MaskMembers(mask | uint64_t{1} << l, n);
    std::vector<double> bigger_eps;
    if (kind == Kind::kNash) {
      for (int m : bigger) {
        if (m == l) {
          bigger_eps.push_back(SelfishEps(g, l, k + 1));
        } else {
          const auto it = std::find(members.begin(), members.end(), m);
          bigger_eps.push_back(eps[it - members.begin()]);
        }
      }
      const double joiner = Burdens(g, bigger, bigger_eps)[l];
      d.margin = std::min(d.margin, std::abs(joiner - g.sigma_sq));
      if (joiner <= g.sigma_sq) d.stable = false;
    } else {
      bigger_eps = SelfishProfile(g, bigger);
      const std::vector<double> after = Burdens(g, bigger, bigger_eps);
      double worst = -std::numeric_limits<double>::infinity();
      for (int m : bigger) worst = std::max(worst, after[m]);
      d.margin = std::min(d.margin, std::abs(worst - g.sigma_sq));
      if (worst <= g.sigma_sq) d.stable = false;
    }
  }
  return d;
}

}  // namespace coalition_dp::oracle

#endif  // COALITION_DP_TESTS_TEST_ORACLES_H_
