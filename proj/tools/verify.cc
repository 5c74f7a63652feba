// Copyright 2026 The mctele Authors
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

#include <cmath>
#include <optional>
#include <ostream>

#include "commands.h"
#include "mctele/analytics.h"
#include "mctele/teleport.h"
#include "output.h"

namespace mctele::cli {

namespace {

constexpr double kOracleTolerance = 1e-9;
constexpr double kSigmaBand = 4.0;
constexpr double kCorruption = 1e-3;
// Conditional oracles are skipped below this branch weight.
constexpr double kMinWeight = 1e-12;

struct Empirical {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
};

struct Check {
  std::string strategy;
  std::string quantity;
  int stage = 0;
  double analytic = 0.0;
  std::optional<double> oracle;
  std::optional<Empirical> empirical;

  bool oracle_ok() const { return !oracle || std::abs(*oracle - analytic) <= kOracleTolerance; }
  bool empirical_ok() const {
    if (!empirical) {
      return true;
    }
    const double band = std::max(kSigmaBand * empirical->stderr_, kOracleTolerance);
    return std::abs(empirical->value - analytic) <= band;
  }
  bool ok() const { return oracle_ok() && empirical_ok(); }
};

std::optional<Empirical> fidelity_sample(const BucketStats& b) {
  if (b.fidelity_samples < 2) {
    return std::nullopt;
  }
  return Empirical{b.mean_fidelity, b.fidelity_stderr, b.fidelity_samples};
}

// Binomial standard error at the predicted probability.
Empirical frequency_sample(double frequency, double predicted, std::int64_t trials) {
  const double p = std::clamp(predicted, 0.0, 1.0);
  return Empirical{frequency, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

std::string strategy_label(const StrategyConfig& cfg) {
  if (cfg.kind == StrategyKind::kDeterministicMe) {
    return "deterministic";
  }
  return "smc(k=" + std::to_string(cfg.k_max) + "," + to_string(cfg.fallback) + ")";
}

std::optional<double> conditional_oracle(const SchmidtChannel& ch, const StrategyConfig& cfg,
                                         const Condition& cond, double tol) {
  if (exact_condition_probability(ch, cfg, cond, tol) < kMinWeight) {
    return std::nullopt;
  }
  return exact_average_fidelity(ch, cfg, cond, tol);
}

void deterministic_checks(const SchmidtChannel& ch, const VerifyOptions& o,
                          std::vector<Check>& checks) {
  const double tol = o.channel.tie_tolerance;
  const StrategyConfig cfg = StrategyConfig::deterministic_me();
  const AggregateStats stats = monte_carlo(ch, cfg, o.trials, o.seed, o.workers, tol);
  Check c{strategy_label(cfg), "F_me", 0, me_fidelity(ch, tol),
          exact_average_fidelity(ch, cfg, Condition::overall(), tol), std::nullopt};
  if (stats.overall_fidelity_samples >= 2) {
    c.empirical = Empirical{stats.overall_mean_fidelity, stats.overall_fidelity_stderr,
                            stats.overall_fidelity_samples};
  }
  checks.push_back(c);
}

void smc_checks(const SchmidtChannel& ch, const VerifyOptions& o, int k_max,
                std::vector<Check>& checks) {
  const double tol = o.channel.tie_tolerance;
  const StrategyConfig cfg = StrategyConfig::sequential_mc(k_max, parse_fallback(o.fallback));
  const std::string label = strategy_label(cfg);
  const AggregateStats stats = monte_carlo(ch, cfg, o.trials, o.seed, o.workers, tol);
  const StageProbabilities probs = stage_probabilities(ch, k_max, tol);

  double oracle_total = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const Condition at = Condition::conclusive_at(k);
    checks.push_back({label, "F_mc_s", k, mc_conclusive_fidelity(ch, k, tol),
                      conditional_oracle(ch, cfg, at, tol),
                      fidelity_sample(stats.conclusive[k - 1])});
    const double p_oracle = exact_condition_probability(ch, cfg, at, tol);
    oracle_total += p_oracle;
    checks.push_back({label, "P_s", k, probs.p_success[k - 1], p_oracle,
                      frequency_sample(stats.conclusive[k - 1].frequency,
                                       probs.p_success[k - 1], o.trials)});
  }
  checks.push_back({label, "P_smc", 0, probs.p_overall, oracle_total,
                    frequency_sample(stats.p_smc, probs.p_overall, o.trials)});

  if (cfg.fallback != Fallback::kDiscard && probs.p_exhausted > kMinWeight) {
    const double analytic = cfg.fallback == Fallback::kGuess
                                ? classical_fidelity(ch.dim())
                                : me_fallback_fidelity(ch, k_max, tol);
    checks.push_back({label, "F_inconclusive", 0, analytic,
                      conditional_oracle(ch, cfg, Condition::inconclusive(), tol),
                      fidelity_sample(stats.inconclusive)});
  }

  Check overall{label, "F_overall", 0, overall_fidelity(ch, cfg, tol),
                exact_average_fidelity(ch, cfg, Condition::overall(), tol), std::nullopt};
  if (stats.overall_fidelity_samples >= 2) {
    overall.empirical = Empirical{stats.overall_mean_fidelity, stats.overall_fidelity_stderr,
                                  stats.overall_fidelity_samples};
  }
  checks.push_back(overall);
}

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : "n/a"; }

}  // namespace

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const SchmidtChannel ch = parse_channel(o.channel);
  if (o.trials < 1000) {
    throw UsageError("--trials must be at least 1000");
  }
  parse_fallback(o.fallback);
  const int max_stages = multiplicity_profile(ch, o.channel.tie_tolerance).max_stages;
  const int k_max = o.k_max < 0 ? max_stages : o.k_max;
  if (k_max > max_stages) {
    throw UsageError("--k-max " + std::to_string(k_max) + " exceeds the " +
                     std::to_string(max_stages) + " stage(s) this channel allows");
  }
  OutputFile csv(o.out);

  std::vector<Check> checks;
  deterministic_checks(ch, o, checks);
  if (k_max >= 1) {
    smc_checks(ch, o, k_max, checks);
  }
  if (o.corrupt_analytic) {
    for (Check& c : checks) {
      c.analytic += kCorruption;
    }
  }

  Table table({"strategy", "quantity", "stage", "analytic", "oracle", "empirical", "stderr",
               "samples", "verdict"});
  int failed = 0;
  for (const Check& c : checks) {
    failed += c.ok() ? 0 : 1;
    table.add({c.strategy, c.quantity, c.stage > 0 ? std::to_string(c.stage) : "",
               format_double(c.analytic), opt_text(c.oracle),
               c.empirical ? format_double(c.empirical->value) : "n/a",
               c.empirical ? format_double(c.empirical->stderr_) : "n/a",
               c.empirical ? std::to_string(c.empirical->samples) : "0",
               c.ok() ? "pass" : (c.oracle_ok() ? "FAIL(empirical)" : "FAIL(oracle)")});
  }

  const std::string echo = "command=verify " + channel_echo(o.channel) +
                           " trials=" + std::to_string(o.trials) +
                           " seed=" + std::to_string(o.seed) + " k_max=" + std::to_string(k_max) +
                           " fallback=" + o.fallback;
  out << echo << '\n';
  out << "bands: |oracle - analytic| <= 1e-09, |empirical - analytic| <= max(4 stderr, 1e-09)\n\n";
  table.print(out);
  out << "\nverdict: " << (failed == 0 ? "PASS" : "FAIL") << " (" << checks.size() << " checks, "
      << failed << " failed)\n";

  if (!o.out.empty()) {
    std::ostream& os = csv.stream(out);
    os << "# " << version_string() << '\n';
    os << "# " << echo << '\n';
    table.write_csv(os);
  }
  return failed == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace mctele::cli
