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

#include "coalition_dp/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "absl/strings/str_format.h"
#include "coalition_dp/centralized.h"

namespace coalition_dp {
namespace {

constexpr double kPointMassValue = 0.5;

double DrawData(const MonteCarloConfig& config, Rng& rng) {
  switch (config.distribution) {
    case DataDistribution::kUniform01:
      return UniformUnit(rng);
    case DataDistribution::kPointMass:
      return kPointMassValue;
    case DataDistribution::kBernoulli:
      return UniformUnit(rng) < config.bernoulli_p ? 1.0 : 0.0;
  }
  return 0.0;
}

// Symmetric uniform on (-0.5, 0.5), as LaplaceSample expects.
double CenteredUniform(Rng& rng) {
  while (true) {
    const double u = UniformUnit(rng) - 0.5;
    if (u > -0.5) return u;
  }
}

template <typename Fn>
void ParallelFor(size_t count, Fn fn) {
  const size_t threads = std::min<size_t>(
      count, std::max(1u, std::thread::hardware_concurrency()));
  if (threads <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::jthread> pool;
  for (size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

void WriteMeta(const CsvMeta& meta, std::ostream& out) {
  out << absl::StrFormat("# meta seed=%d abs_tol=%.17g rel_tol=%.17g generator=%s\n",
                         meta.seed, meta.tolerance.abs_tol,
                         meta.tolerance.rel_tol, kRngName);
}

const char* Bool(bool b) { return b ? "true" : "false"; }

}  // namespace

double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

absl::StatusOr<std::vector<SweepRow>> SweepSigma(
    std::span<const double> costs, double alpha,
    std::span<const double> sigma_grid, const EnumerationOptions& options) {
  for (size_t i = 0; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > 0)) {
      return absl::InvalidArgumentError("Sigma grid must be positive");
    }
    if (i > 0 && !(sigma_grid[i] > sigma_grid[i - 1])) {
      return absl::InvalidArgumentError("Sigma grid must be ascending");
    }
  }
  absl::StatusOr<ProblemInstance> base = ProblemInstance::Create(
      std::vector<double>(costs.begin(), costs.end()), 1.0, alpha);
  if (!base.ok()) return base.status();
  if (base->n() > options.max_n) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "Sigma sweep enumerates every coalition; n = %d exceeds the cap %d",
        base->n(), options.max_n));
  }

  std::vector<SweepRow> rows(sigma_grid.size());
  std::vector<absl::Status> errors(sigma_grid.size());
  EnumerationOptions inner = options;
  inner.threads = 1;
  ParallelFor(sigma_grid.size(), [&](size_t i) {
    const double sigma = sigma_grid[i];
    const ProblemInstance instance = *base->WithSigmaSq(sigma * sigma);
    SweepRow& row = rows[i];
    row.sigma = sigma;
    for (StabilityKind kind : {StabilityKind::kNash, StabilityKind::kRobust}) {
      absl::StatusOr<std::vector<Coalition>> stable =
          EnumerateEquilibria(instance, kind, inner);
      if (!stable.ok()) {
        errors[i] = stable.status();
        return;
      }
      int max_size = 0;
      double best_sc = instance.n() * instance.sigma_sq();
      for (const Coalition& s : *stable) {
        max_size = std::max(max_size, s.size());
        best_sc = std::min(best_sc, *DecentralSocialCost(s, instance));
      }
      if (kind == StabilityKind::kNash) {
        row.max_nash_size = max_size;
        row.nash_exists = !stable->empty();
        row.best_sc_nash = best_sc;
      } else {
        row.max_robust_size = max_size;
        row.robust_exists = !stable->empty();
        row.best_sc_robust = best_sc;
      }
    }
  });
  for (const absl::Status& s : errors) {
    if (!s.ok()) return s;
  }
  return rows;
}

std::vector<double> DefaultSigmaGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 90; ++i) grid.push_back(0.15 + 0.005 * i);
  return grid;
}

absl::StatusOr<ScalingResult> SweepScaling(double alpha, double cost,
                                           double sigma_sq,
                                           std::span<const int> n_grid,
                                           StabilityKind kind) {
  ScalingResult result;
  for (int n : n_grid) {
    if (n < 2) return absl::InvalidArgumentError("Grid sizes must be >= 2");
    absl::StatusOr<ProblemInstance> instance =
        ProblemInstance::Create(std::vector<double>(n, cost), sigma_sq, alpha);
    if (!instance.ok()) return instance.status();
    absl::StatusOr<PosReport> pos = PriceOfStability(*instance, kind);
    if (!pos.ok()) return pos.status();
    absl::StatusOr<StableOptimum> decentral =
        OptimalStableCoalition(*instance, kind);
    if (!decentral.ok()) return decentral.status();
    const CentralizedSolution& central = pos->central_solution;
    result.rows.push_back(
        {.n = n,
         .sc_central = central.social_cost,
         .var_central = central.variance.value_or(sigma_sq),
         .sc_decentral = decentral->social_cost,
         .var_decentral = decentral->variance,
         .pos_sc = pos->pos_sc,
         .pos_var = pos->pos_var});
  }

  auto fit = [&](double ScalingRow::*field) -> absl::StatusOr<LogLogFit> {
    std::vector<double> x, y;
    for (const ScalingRow& row : result.rows) {
      x.push_back(row.n);
      y.push_back(row.*field);
    }
    return FitLogLog(x, y);
  };
  const std::pair<LogLogFit*, double ScalingRow::*> columns[] = {
      {&result.fits.sc_central, &ScalingRow::sc_central},
      {&result.fits.var_central, &ScalingRow::var_central},
      {&result.fits.sc_decentral, &ScalingRow::sc_decentral},
      {&result.fits.var_decentral, &ScalingRow::var_decentral},
      {&result.fits.pos_sc, &ScalingRow::pos_sc},
      {&result.fits.pos_var, &ScalingRow::pos_var},
  };
  for (const auto& [target, field] : columns) {
    absl::StatusOr<LogLogFit> f = fit(field);
    if (!f.ok()) return f.status();
    *target = *f;
  }
  return result;
}

std::vector<int> DefaultScalingGrid() {
  std::vector<int> grid;
  for (int n = 16; n <= 2048; n *= 2) grid.push_back(n);
  return grid;
}

double DataVariance(const MonteCarloConfig& config) {
  switch (config.distribution) {
    case DataDistribution::kUniform01:
      return 1.0 / 12.0;
    case DataDistribution::kPointMass:
      return 0.0;
    case DataDistribution::kBernoulli:
      return config.bernoulli_p * (1.0 - config.bernoulli_p);
  }
  return 0.0;
}

absl::StatusOr<MonteCarloResult> MonteCarloVariance(
    const Coalition& coalition, const PrivacyProfile& profile,
    const MonteCarloConfig& config) {
  if (coalition.empty()) {
    return absl::InvalidArgumentError("no estimator for empty coalition");
  }
  if (absl::Status s = ValidateProfile(coalition, profile); !s.ok()) return s;
  if (config.samples < 2) {
    return absl::InvalidArgumentError("Monte Carlo needs at least 2 samples");
  }
  if (config.distribution == DataDistribution::kBernoulli &&
      !(config.bernoulli_p >= 0 && config.bernoulli_p <= 1)) {
    return absl::InvalidArgumentError("Bernoulli p must lie in [0, 1]");
  }

  const double k = coalition.size();
  Rng rng(config.seed);
  std::vector<double> estimates(config.samples);
  for (double& estimate : estimates) {
    double total = 0;
    for (double eps : profile.levels) {
      total += DrawData(config, rng) +
               *LaplaceSample(1.0 / eps, CenteredUniform(rng));
    }
    estimate = total / k;
  }

  const double count = static_cast<double>(config.samples);
  double mean = 0;
  for (double e : estimates) mean += e;
  mean /= count;
  double m2 = 0, m4 = 0;
  for (double e : estimates) {
    const double d2 = (e - mean) * (e - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= count;
  m4 /= count;

  double inverse_sq_sum = 0;
  for (double eps : profile.levels) inverse_sq_sum += 1.0 / (eps * eps);

  MonteCarloResult result;
  result.empirical_var = m2 * count / (count - 1);
  result.predicted =
      DataVariance(config) / k + 2.0 / (k * k) * inverse_sq_sum;
  const double s4 = result.empirical_var * result.empirical_var;
  result.standard_error =
      std::sqrt(std::max(0.0, m4 - (count - 3) / (count - 1) * s4) / count);
  result.z_score = (result.empirical_var - result.predicted) /
                   result.standard_error;
  return result;
}

absl::StatusOr<MonteCarloResult> MonteCarloVariance(
    const Coalition& coalition, const ProblemInstance& instance,
    const MonteCarloConfig& config) {
  if (coalition.empty()) {
    return absl::InvalidArgumentError("no estimator for empty coalition");
  }
  if (coalition.members().back() >= instance.n()) {
    return absl::InvalidArgumentError("Coalition does not fit the instance");
  }
  return MonteCarloVariance(coalition, BestResponseProfile(coalition, instance),
                            config);
}

absl::StatusOr<ProblemInstance> RandomInstance(
    const RandomInstanceOptions& options) {
  const int n = options.n;
  if (n < 1) return absl::InvalidArgumentError("n must be positive");
  if (!(options.c_min > 0) || !(options.c_min <= options.c_max) ||
      !std::isfinite(options.c_max)) {
    return absl::InvalidArgumentError("Need 0 < c_min <= c_max < inf");
  }

  Rng rng(options.seed);
  std::vector<double> costs(n);
  if (!options.well_separated) {
    for (double& c : costs) {
      c = options.c_min + (options.c_max - options.c_min) * UniformUnit(rng);
    }
  } else {
    // log c_i = log c_min + i log 2 + x_i with sorted x_i in [0, slack].
    const double slack = std::log(options.c_max / options.c_min) -
                         (n - 1) * std::log(2.0);
    if (slack < 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Well-separated costs need c_max >= 2^%d c_min", n - 1));
    }
    std::vector<double> offsets(n);
    for (double& x : offsets) x = slack * UniformUnit(rng);
    std::sort(offsets.begin(), offsets.end());
    for (int i = 0; i < n; ++i) {
      costs[i] = std::min(options.c_max,
                          options.c_min * std::exp(offsets[i]) * std::ldexp(1.0, i));
      if (i > 0) costs[i] = std::max(costs[i], 2 * costs[i - 1]);
    }
  }
  return ProblemInstance::Create(std::move(costs), options.sigma_sq,
                                 options.alpha);
}

void WriteSweepCsv(std::span<const SweepRow> rows, const CsvMeta& meta,
                   std::ostream& out) {
  WriteMeta(meta, out);
  out << "sigma,max_nash_size,max_robust_size,nash_exists,robust_exists,"
         "best_sc_nash,best_sc_robust\n";
  for (const SweepRow& r : rows) {
    out << absl::StrFormat("%.17g,%d,%d,%s,%s,%.17g,%.17g\n", r.sigma,
                           r.max_nash_size, r.max_robust_size,
                           Bool(r.nash_exists), Bool(r.robust_exists),
                           r.best_sc_nash, r.best_sc_robust);
  }
}

void WriteScalingCsv(const ScalingResult& result, const CsvMeta& meta,
                     std::ostream& out) {
  WriteMeta(meta, out);
  out << "n,sc_central,var_central,sc_decentral,var_decentral,pos_sc,pos_var\n";
  for (const ScalingRow& r : result.rows) {
    out << absl::StrFormat("%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n,
                           r.sc_central, r.var_central, r.sc_decentral,
                           r.var_decentral, r.pos_sc, r.pos_var);
  }
  const std::pair<const char*, const LogLogFit*> fits[] = {
      {"sc_central", &result.fits.sc_central},
      {"var_central", &result.fits.var_central},
      {"sc_decentral", &result.fits.sc_decentral},
      {"var_decentral", &result.fits.var_decentral},
      {"pos_sc", &result.fits.pos_sc},
      {"pos_var", &result.fits.pos_var},
  };
  for (const auto& [name, fit] : fits) {
    out << absl::StrFormat(
        "# fit column=%s slope=%.17g intercept=%.17g r_squared=%.17g\n", name,
        fit->slope, fit->intercept, fit->r_squared);
  }
}

}  // namespace coalition_dp
