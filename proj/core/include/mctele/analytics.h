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

#ifndef MCTELE_ANALYTICS_H
#define MCTELE_ANALYTICS_H

#include <iosfwd>
#include <string>
#include <vector>

#include "mctele/channel.h"
#include "mctele/teleport.h"

namespace mctele {

// Closed-form fidelities and probabilities. Every function works from the
// channel's multiplicity profile, so tie decisions match the stage plan.
//
// Stage k exists for 1 <= k <= max(M, 1); a rank-one channel has a single
// trivially conclusive stage.

/// Best deterministic average fidelity, (1 + (sum a)^2) / (D + 1).
double me_fidelity(const SchmidtChannel& channel, double tie_tolerance = kDefaultTieTolerance);

/// Singlet fraction of the deterministic protocol, (sum a)^2 / D.
double me_singlet_fraction(const SchmidtChannel& channel,
                           double tie_tolerance = kDefaultTieTolerance);

/// Best average fidelity without entanglement, 2 / (D + 1).
double classical_fidelity(int dim);

/// Fidelity after a conclusive outcome at stage k, via the recursion
/// F_k = F_{k-1} - mu_{k-1} / (D + 1) from F_1 = (N + 1) / (D + 1).
double mc_conclusive_fidelity_recursive(const SchmidtChannel& channel, int stage,
                                        double tie_tolerance = kDefaultTieTolerance);

/// Fidelity after a conclusive outcome at stage k, (1 + sum_{j>=k} mu_j) / (D + 1).
double mc_conclusive_fidelity_direct(const SchmidtChannel& channel, int stage,
                                     double tie_tolerance = kDefaultTieTolerance);

/// Both forms above, checked against each other. Throws std::logic_error if
/// they disagree by more than 1e-12, std::invalid_argument for a bad stage.
double mc_conclusive_fidelity(const SchmidtChannel& channel, int stage,
                              double tie_tolerance = kDefaultTieTolerance);

/// Conclusive fidelity at the last stage, (mu_{d-1} [mu_d == 1] + mu_d + 1) / (D + 1).
double mc_last_stage_fidelity(const SchmidtChannel& channel,
                              double tie_tolerance = kDefaultTieTolerance);

/// Singlet fraction after a conclusive outcome at stage k.
double mc_singlet_fraction(const SchmidtChannel& channel, int stage,
                           double tie_tolerance = kDefaultTieTolerance);

/// Fidelity of a minimum-error finish after the first stage failed, as the
/// deterministic fidelity of the failure coefficients. Requires at least two
/// distinct coefficients.
double me_after_fail_fidelity(const SchmidtChannel& channel,
                              double tie_tolerance = kDefaultTieTolerance);

/// Same quantity as the classical bound plus the explicit double sum over
/// pairs m != m' of sqrt((a_m^2 - a_min^2)(a_m'^2 - a_min^2)) / ((D + 1) P_fail).
double me_after_fail_fidelity_literal(const SchmidtChannel& channel,
                                      double tie_tolerance = kDefaultTieTolerance);

/// Minimum-error finish after k consecutive failures (k < d).
double me_fallback_fidelity(const SchmidtChannel& channel, int after_stage,
                            double tie_tolerance = kDefaultTieTolerance);

struct StageProbabilities {
  /// Indexed by stage - 1, up to the requested stage.
  std::vector<double> p_fail;
  std::vector<double> p_success;
  /// Probability that some stage up to k was conclusive.
  double p_overall = 0.0;
  /// Probability that every stage up to k failed.
  double p_exhausted = 0.0;
};

/// Success probability of each stage up to k, (1 - P_k) prod_{j<k} P_j,
/// and the cumulative success probability.
StageProbabilities stage_probabilities(const SchmidtChannel& channel, int stage,
                                       double tie_tolerance = kDefaultTieTolerance);

/// Overall fidelity of a strategy, averaging conclusive and fallback runs.
///
/// For the discard fallback, the fidelity conditioned on delivery.
double overall_fidelity(const SchmidtChannel& channel, const StrategyConfig& config,
                        double tie_tolerance = kDefaultTieTolerance);

/// One MC stage then a minimum-error finish, written out term by term:
/// F_clas + N a_min^2 (N - 1) / (D + 1) + sum_{m != m'} sqrt(...) / (D + 1).
double overall_me_literal(const SchmidtChannel& channel,
                          double tie_tolerance = kDefaultTieTolerance);

/// Every allowed stage, with a classical-quality finish only when the
/// largest coefficient is unique: sum_j P_j F_j + [mu_d == 1] (1 - P) F_clas.
double overall_smc_literal(const SchmidtChannel& channel,
                           double tie_tolerance = kDefaultTieTolerance);

struct ChannelReport {
  int dim = 0;
  int rank = 0;
  int d = 0;
  int max_stages = 0;
  double f_me = 0.0;            // deterministic fidelity
  double singlet_me = 0.0;      // deterministic singlet fraction
  double f_clas = 0.0;
  std::vector<double> f_mc_s;        // conclusive fidelity per stage
  std::vector<double> singlet_mc_s;  // conclusive singlet fraction per stage
  std::vector<double> p_fail;
  std::vector<double> p_success;
  std::vector<bool> useful;
  std::vector<double> p_smc_overall;  // cumulative success probability
  double f_me_after_fail = 0.0;       // NaN when every coefficient is equal
  double overall_me = 0.0;            // one stage, minimum-error finish
  double overall_smc = 0.0;           // every stage

  int stage_rows() const { return static_cast<int>(f_mc_s.size()); }
};

/// Evaluates everything and cross-checks the redundant forms. Throws
/// std::logic_error if an internal identity fails.
ChannelReport channel_report(const SchmidtChannel& channel,
                             double tie_tolerance = kDefaultTieTolerance);

/// Long-format CSV: `#` metadata lines, then `quantity,stage,value` rows with
/// 15 significant digits. Stage is empty for scalar quantities.
void write_report_csv(std::ostream& out, const ChannelReport& report,
                      const std::vector<std::string>& metadata = {});

/// Parses the output of write_report_csv. Throws std::invalid_argument with
/// the offending line number on malformed input.
ChannelReport read_report_csv(std::istream& in);

/// printf("%.15g").
std::string format_double(double value);

}  // namespace mctele

#endif  // MCTELE_ANALYTICS_H
