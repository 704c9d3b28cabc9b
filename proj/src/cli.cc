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

#include "coalition_dp/cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/numbers.h"
#include "absl/strings/strip.h"
#include "coalition_dp/centralized.h"
#include "coalition_dp/decentralized.h"
#include "coalition_dp/efficiency.h"
#include "coalition_dp/experiments.h"
#include "json.hpp"

namespace coalition_dp {
namespace {

using nlohmann::json;

absl::Status InstanceError(absl::string_view code, absl::string_view message) {
  absl::Status status = absl::InvalidArgumentError(message);
  status.SetPayload(kErrorCodeUrl, absl::Cord(code));
  return status;
}

absl::StatusOr<std::string> ReadDocument(absl::string_view path_or_text) {
  absl::string_view trimmed = absl::StripLeadingAsciiWhitespace(path_or_text);
  if (absl::StartsWith(trimmed, "{")) return std::string(trimmed);
  std::ifstream in{std::string(path_or_text)};
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("Cannot open instance file '", path_or_text, "'"));
  }
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Flag values shared by the subcommands.
struct Flags {
  std::string instance;
  std::string stability = "nash";
  double tolerance = Tolerance{}.rel_tol;
  int max_brute_force_n = 20;
  std::string output;
  uint64_t seed = 1;
  std::string grid;
  std::string coalition;
  int64_t samples = 100000;
  std::string distribution = "uniform_01";
};

std::string Num(double v) { return absl::StrFormat("%.6g", v); }

std::string Players(const Coalition& coalition,
                    const ProblemInstance& instance) {
  if (coalition.empty()) return "{}";
  std::vector<int> labels;
  for (int m : coalition.members()) labels.push_back(instance.labels()[m] + 1);
  std::sort(labels.begin(), labels.end());
  return absl::StrCat("{", absl::StrJoin(labels, ","), "}");
}

absl::StatusOr<std::vector<double>> ParseGrid(absl::string_view text) {
  std::vector<std::string> parts = absl::StrSplit(text, ':');
  double start, stop;
  if (parts.size() != 3 || !absl::SimpleAtod(parts[0], &start) ||
      !absl::SimpleAtod(parts[1], &stop)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Grid '", text, "' is not start:stop:step"));
  }
  std::vector<double> grid;
  double step;
  absl::string_view step_text = parts[2];
  if (absl::ConsumePrefix(&step_text, "x")) {
    if (!absl::SimpleAtod(step_text, &step) || !(step > 1) || !(start > 0)) {
      return absl::InvalidArgumentError(
          "Multiplicative grid needs start > 0 and factor > 1");
    }
    for (double v = start; v <= stop * (1 + 1e-12); v *= step) grid.push_back(v);
    return grid;
  }
  if (!absl::SimpleAtod(step_text, &step) || !(step > 0) || stop < start) {
    return absl::InvalidArgumentError("Grid needs step > 0 and stop >= start");
  }
  const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  for (int i = 0; i <= count; ++i) grid.push_back(start + i * step);
  return grid;
}

absl::StatusOr<MonteCarloConfig> ParseDistribution(const Flags& flags) {
  MonteCarloConfig config{.samples = flags.samples, .seed = flags.seed};
  absl::string_view name = flags.distribution;
  if (name == "uniform_01") {
    config.distribution = DataDistribution::kUniform01;
  } else if (name == "point_mass") {
    config.distribution = DataDistribution::kPointMass;
  } else if (absl::ConsumePrefix(&name, "bernoulli")) {
    config.distribution = DataDistribution::kBernoulli;
    if (absl::ConsumePrefix(&name, ":") &&
        !absl::SimpleAtod(name, &config.bernoulli_p)) {
      return absl::InvalidArgumentError("Bad Bernoulli parameter");
    }
  } else {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Unknown distribution '%s'; expected uniform_01, point_mass or "
        "bernoulli[:p]",
        flags.distribution));
  }
  return config;
}

// Output goes to --output when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) : out_(&out) {
    if (!path.empty()) {
      file_.open(path);
      out_ = &file_;
    }
  }
  bool ok() const { return !file_.is_open() || file_.good(); }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

absl::Status RunCentralized(const ProblemInstance& instance, std::ostream& out) {
  const CentralizedSolution solution = SolveCentralized(instance);
  out << "k_star: " << solution.k_star << "\n";
  out << "coalition: " << Players(solution.coalition, instance) << "\n";
  out << "epsilon:";
  for (double eps : solution.profile.levels) out << " " << Num(eps);
  out << "\n";
  out << "social_cost: " << Num(solution.social_cost) << "\n";
  out << "variance: "
      << Num(solution.variance.value_or(instance.sigma_sq())) << "\n";
  out << "regime: "
      << RegimeName(ClassifyRegimeCentralized(instance.alpha()).regime) << "\n";
  return absl::OkStatus();
}

absl::Status RunEquilibria(const ProblemInstance& instance, StabilityKind kind,
                           const EnumerationOptions& options, Sink& sink) {
  absl::StatusOr<std::vector<Coalition>> stable;
  std::string method = "enumeration";
  if (instance.n() <= options.max_n) {
    stable = EnumerateEquilibria(instance, kind, options);
  } else {
    method = "downward_closed_scan";
    stable = DownwardClosedScan(instance, kind, options.tol);
  }
  if (!stable.ok()) return stable.status();
  std::ostream& out = sink.stream();
  out << absl::StrFormat("# %s equilibria via %s: %d\n",
                         StabilityKindName(kind), method, stable->size());
  out << "coalition,size,social_cost,variance,boundary\n";
  for (const Coalition& s : *stable) {
    const StabilityVerdict verdict =
        *StableClosedForm(s, instance, kind, options.tol);
    out << absl::StrFormat("\"%s\",%d,%s,%s,%s\n", Players(s, instance),
                           s.size(), Num(*DecentralSocialCost(s, instance)),
                           Num(*DecentralVariance(s, instance)),
                           verdict.boundary_flag ? "true" : "false");
  }
  return absl::OkStatus();
}

absl::Status RunPos(const ProblemInstance& instance, StabilityKind kind,
                    const EnumerationOptions& options, std::ostream& out) {
  absl::StatusOr<PosReport> report = PriceOfStability(
      instance, kind,
      {.enumeration = options, .variance_optimal_diagnostic = true});
  if (!report.ok()) return report.status();
  out << "stability: " << StabilityKindName(kind) << "\n";
  out << "pos_sc: " << Num(report->pos_sc) << "\n";
  out << "pos_var: " << Num(report->pos_var) << "\n";
  out << "pos_var_variance_optimal: "
      << Num(*report->pos_var_variance_optimal) << "\n";
  out << "decentral_coalition: "
      << Players(report->decentral_coalition, instance) << "\n";
  out << "central_k_star: " << report->central_solution.k_star << "\n";
  out << "central_coalition: "
      << Players(report->central_solution.coalition, instance) << "\n";
  out << "central_social_cost: "
      << Num(report->central_solution.social_cost) << "\n";
  if (report->bound_high_alpha) {
    out << "bound_high_alpha: " << Num(*report->bound_high_alpha) << "\n";
  }
  return absl::OkStatus();
}

absl::Status RunSweepSigma(const ProblemInstance& instance,
                           const std::vector<double>& grid,
                           const EnumerationOptions& options,
                           const CsvMeta& meta, Sink& sink, bool to_file) {
  std::vector<double> costs(instance.n());
  for (int i = 0; i < instance.n(); ++i) {
    costs[instance.labels()[i]] = instance.cost(i);
  }
  absl::StatusOr<std::vector<SweepRow>> rows =
      SweepSigma(costs, instance.alpha(), grid, options);
  if (!rows.ok()) return rows.status();
  if (to_file) {
    WriteSweepCsv(*rows, meta, sink.stream());
    return absl::OkStatus();
  }
  std::ostream& out = sink.stream();
  out << absl::StrFormat("%-10s %-9s %-11s %-12s %-14s\n", "sigma",
                         "max_nash", "max_robust", "best_sc_nash",
                         "best_sc_robust");
  for (const SweepRow& r : *rows) {
    out << absl::StrFormat("%-10s %-9d %-11d %-12s %-14s\n", Num(r.sigma),
                           r.max_nash_size, r.max_robust_size,
                           Num(r.best_sc_nash), Num(r.best_sc_robust));
  }
  return absl::OkStatus();
}

absl::Status RunSweepN(const ProblemInstance& instance,
                       const std::vector<double>& grid, StabilityKind kind,
                       const CsvMeta& meta, Sink& sink, bool to_file) {
  std::vector<int> n_grid;
  for (double v : grid) {
    const int n = static_cast<int>(std::lround(v));
    if (n_grid.empty() || n != n_grid.back()) n_grid.push_back(n);
  }
  absl::StatusOr<ScalingResult> result =
      SweepScaling(instance.alpha(), instance.cost(0), instance.sigma_sq(),
                   n_grid, kind);
  if (!result.ok()) return result.status();
  if (to_file) {
    WriteScalingCsv(*result, meta, sink.stream());
    return absl::OkStatus();
  }
  std::ostream& out = sink.stream();
  out << absl::StrFormat("%-6s %-12s %-12s %-12s %-12s %-12s %-12s\n", "n",
                         "sc_central", "var_central", "sc_decentral",
                         "var_decentral", "pos_sc", "pos_var");
  for (const ScalingRow& r : result->rows) {
    out << absl::StrFormat("%-6d %-12s %-12s %-12s %-12s %-12s %-12s\n", r.n,
                           Num(r.sc_central), Num(r.var_central),
                           Num(r.sc_decentral), Num(r.var_decentral),
                           Num(r.pos_sc), Num(r.pos_var));
  }
  const std::pair<const char*, const LogLogFit*> fits[] = {
      {"sc_central", &result->fits.sc_central},
      {"var_central", &result->fits.var_central},
      {"sc_decentral", &result->fits.sc_decentral},
      {"var_decentral", &result->fits.var_decentral},
      {"pos_sc", &result->fits.pos_sc},
      {"pos_var", &result->fits.pos_var},
  };
  for (const auto& [name, fit] : fits) {
    out << absl::StrFormat("slope %-14s %s (R^2 %s)\n", name, Num(fit->slope),
                           Num(fit->r_squared));
  }
  return absl::OkStatus();
}

absl::StatusOr<Coalition> ParseCoalitionFlag(absl::string_view text,
                                             const ProblemInstance& instance) {
  std::vector<int> position_to_index(instance.n());
  for (int i = 0; i < instance.n(); ++i) {
    position_to_index[instance.labels()[i]] = i;
  }
  std::vector<int> members;
  for (absl::string_view token : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    int player;
    if (!absl::SimpleAtoi(token, &player) || player < 1 ||
        player > instance.n()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Coalition entry '", token, "' is not a player in 1..",
                       instance.n()));
    }
    members.push_back(position_to_index[player - 1]);
  }
  return Coalition::Create(std::move(members), instance.n());
}

absl::Status RunSimulate(const ProblemInstance& instance, const Flags& flags,
                         std::ostream& out) {
  absl::StatusOr<Coalition> coalition =
      ParseCoalitionFlag(flags.coalition, instance);
  if (!coalition.ok()) return coalition.status();
  absl::StatusOr<MonteCarloConfig> config = ParseDistribution(flags);
  if (!config.ok()) return config.status();
  absl::StatusOr<MonteCarloResult> result =
      MonteCarloVariance(*coalition, instance, *config);
  if (!result.ok()) return result.status();
  out << "coalition: " << Players(*coalition, instance) << "\n";
  out << "samples: " << config->samples << "\n";
  out << "generator: " << kRngName << " seed=" << config->seed << "\n";
  out << "empirical_var: " << Num(result->empirical_var) << "\n";
  out << "predicted: " << Num(result->predicted) << "\n";
  out << "standard_error: " << Num(result->standard_error) << "\n";
  out << "z_score: " << Num(result->z_score) << "\n";
  return absl::OkStatus();
}

}  // namespace

std::string InstanceErrorCode(const absl::Status& status) {
  auto code = status.GetPayload(kErrorCodeUrl);
  return code ? std::string(*code) : "";
}

absl::StatusOr<ProblemInstance> ParseInstance(absl::string_view path_or_text) {
  absl::StatusOr<std::string> text = ReadDocument(path_or_text);
  if (!text.ok()) return text.status();
  json doc = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return InstanceError("malformed", "Instance is not a JSON object");
  }
  for (const char* key : {"alpha", "sigma_sq", "costs"}) {
    if (!doc.contains(key)) {
      return InstanceError("missing_key",
                           absl::StrFormat("Missing required key '%s'", key));
    }
  }
  if (!doc["alpha"].is_number() || !doc["sigma_sq"].is_number() ||
      !doc["costs"].is_array() || doc["costs"].empty()) {
    return InstanceError("malformed",
                         "alpha and sigma_sq must be numbers and costs a "
                         "non-empty array");
  }
  std::vector<double> costs;
  for (const json& c : doc["costs"]) {
    if (!c.is_number()) {
      return InstanceError("malformed", "costs must contain only numbers");
    }
    costs.push_back(c.get<double>());
    if (!(costs.back() > 0)) {
      return InstanceError(
          "non_positive_cost",
          absl::StrFormat("Cost at position %d must be positive, got %g",
                          costs.size(), costs.back()));
    }
  }
  const double alpha = doc["alpha"].get<double>();
  if (!(alpha >= -1 && alpha <= 1)) {
    return InstanceError(
        "alpha_out_of_range",
        absl::StrFormat("alpha must lie in [-1, 1], got %g", alpha));
  }
  const double sigma_sq = doc["sigma_sq"].get<double>();
  if (!(sigma_sq > 0)) {
    return InstanceError(
        "sigma_sq_non_positive",
        absl::StrFormat("sigma_sq must be positive, got %g", sigma_sq));
  }
  absl::StatusOr<ProblemInstance> instance =
      ProblemInstance::Create(std::move(costs), sigma_sq, alpha);
  if (!instance.ok()) {
    return InstanceError("malformed", instance.status().message());
  }
  return instance;
}

std::string EmitInstance(const ProblemInstance& instance) {
  std::vector<double> costs(instance.n());
  for (int i = 0; i < instance.n(); ++i) {
    costs[instance.labels()[i]] = instance.cost(i);
  }
  json doc = {{"alpha", instance.alpha()},
              {"sigma_sq", instance.sigma_sq()},
              {"costs", costs}};
  return doc.dump();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Coalition formation for private mean estimation",
               "coalition-dp"};
  app.require_subcommand(1);
  Flags flags;

  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("--instance", flags.instance,
                    "Instance document: file path or inline JSON")
        ->required();
  };
  auto add_search = [&](CLI::App* cmd) {
    cmd->add_option("--stability", flags.stability, "nash or robust")
        ->check(CLI::IsMember({"nash", "robust"}));
    cmd->add_option("--tolerance", flags.tolerance,
                    "Relative tolerance for boundary decisions");
    cmd->add_option("--max-brute-force-n", flags.max_brute_force_n,
                    "Largest n searched exhaustively");
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", flags.output, "Write CSV to this file");
    cmd->add_option("--seed", flags.seed, "Seed recorded in CSV metadata");
  };

  CLI::App* centralized =
      app.add_subcommand("centralized", "Socially optimal coalition");
  add_instance(centralized);

  CLI::App* equilibria =
      app.add_subcommand("equilibria", "List stable coalitions");
  add_instance(equilibria);
  add_search(equilibria);
  equilibria->add_option("--output", flags.output, "Write CSV to this file");

  CLI::App* pos = app.add_subcommand("pos", "Price of Stability");
  add_instance(pos);
  add_search(pos);

  CLI::App* sweep_sigma =
      app.add_subcommand("sweep-sigma", "Equilibrium sizes across sigma");
  add_instance(sweep_sigma);
  add_search(sweep_sigma);
  add_output(sweep_sigma);
  sweep_sigma->add_option("--grid", flags.grid, "sigma grid start:stop:step")
      ->default_str("0.15:0.6:0.005");

  CLI::App* sweep_n = app.add_subcommand(
      "sweep-n", "Identical-cost scaling in n (uses alpha, sigma_sq, costs[0])");
  add_instance(sweep_n);
  add_search(sweep_n);
  add_output(sweep_n);
  sweep_n->add_option("--grid", flags.grid, "n grid start:stop:step or start:stop:xF")
      ->default_str("16:2048:x2");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo check of the variance");
  add_instance(simulate);
  simulate->add_option("--coalition", flags.coalition,
                       "Comma-separated 1-based players")
      ->required();
  simulate->add_option("--samples", flags.samples, "Number of draws");
  simulate->add_option("--seed", flags.seed, "Generator seed");
  simulate->add_option("--distribution", flags.distribution,
                       "uniform_01, point_mass or bernoulli[:p]");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  absl::StatusOr<ProblemInstance> instance = ParseInstance(flags.instance);
  if (!instance.ok()) {
    const std::string code = InstanceErrorCode(instance.status());
    err << "error" << (code.empty() ? "" : absl::StrCat(" [", code, "]"))
        << ": " << instance.status().message() << "\n";
    return 1;
  }
  absl::StatusOr<StabilityKind> kind = ParseStabilityKind(flags.stability);
  if (!kind.ok()) {
    err << "error: " << kind.status().message() << "\n";
    return 2;
  }
  EnumerationOptions options;
  options.max_n = flags.max_brute_force_n;
  options.tol.rel_tol = flags.tolerance;
  if (absl::Status s = ValidateTolerance(options.tol); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return 2;
  }
  const CsvMeta meta{.seed = flags.seed, .tolerance = options.tol};

  Sink sink(flags.output, out);
  if (!sink.ok()) {
    err << "error: cannot open " << flags.output << " for writing\n";
    return 1;
  }
  const bool to_file = !flags.output.empty();

  absl::Status status;
  if (centralized->parsed()) {
    status = RunCentralized(*instance, out);
  } else if (equilibria->parsed()) {
    status = RunEquilibria(*instance, *kind, options, sink);
  } else if (pos->parsed()) {
    status = RunPos(*instance, *kind, options, out);
  } else if (sweep_sigma->parsed() || sweep_n->parsed()) {
    const bool by_sigma = sweep_sigma->parsed();
    const std::string grid_text =
        flags.grid.empty() ? (by_sigma ? "0.15:0.6:0.005" : "16:2048:x2")
                           : flags.grid;
    absl::StatusOr<std::vector<double>> grid = ParseGrid(grid_text);
    if (!grid.ok()) {
      err << "error: " << grid.status().message() << "\n";
      return 2;
    }
    status = by_sigma
                 ? RunSweepSigma(*instance, *grid, options, meta, sink, to_file)
                 : RunSweepN(*instance, *grid, *kind, meta, sink, to_file);
  } else if (simulate->parsed()) {
    status = RunSimulate(*instance, flags, out);
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace coalition_dp
