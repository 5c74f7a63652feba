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

#ifndef MCTELE_TELEPORT_H
#define MCTELE_TELEPORT_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mctele/channel.h"
#include "mctele/discrimination.h"
#include "mctele/qudit.h"

namespace mctele {

enum class StrategyKind { kDeterministicMe, kSequentialMc };

/// What Alice and Bob do after every agreed stage came out inconclusive.
enum class Fallback {
  /// Abandon the attempt; nothing reaches Bob.
  kDiscard,
  /// Finish with the minimum-error measurement on the failure states.
  kMe,
  /// Finish the readout but Bob applies only the shift correction X^{-k'}.
  kGuess,
};

std::string to_string(StrategyKind kind);
std::string to_string(Fallback fallback);
/// Accepts "discard", "me", "guess". Throws std::invalid_argument otherwise.
Fallback parse_fallback(const std::string& text);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::kDeterministicMe;
  int k_max = 0;
  Fallback fallback = Fallback::kMe;

  static StrategyConfig deterministic_me() { return {StrategyKind::kDeterministicMe, 0, Fallback::kMe}; }
  static StrategyConfig sequential_mc(int k_max, Fallback fallback) {
    return {StrategyKind::kSequentialMc, k_max, fallback};
  }
};

/// Outcome trace of one protocol run.
struct TeleportRecord {
  QuditState input_state;
  /// 0 on the deterministic path; otherwise the last MC stage executed.
  int stage_reached = 0;
  bool conclusive = false;
  /// True when the fallback finished the run after an exhausted SMC.
  bool fallback_used = false;
  /// Alice's readout (l', k'); -1 when the run was discarded before readout.
  int alice_l = -1;
  int alice_k = -1;
  int classical_bits_used = 0;
  int ancillas_used = 0;
  std::optional<QuditState> bob_state;
  std::optional<double> run_fidelity;
};

/// Bits of the final (l', k') message: 2 * ceil(log2 D).
int readout_message_bits(int dim);

/// Runs the protocol for a fixed channel and strategy.
///
/// The register is |Psi>_{12} (x) |phi>_3, laid out (Bob, Alice's half,
/// unknown). Alice applies GXOR with her half as control, then either the
/// minimum-error readout directly or up to k_max filtering stages first.
class Teleporter {
 public:
  /// Throws std::invalid_argument when k_max is outside 1..M for an SMC
  /// strategy, or when the channel has rank one and an SMC strategy is asked.
  Teleporter(SchmidtChannel channel, StrategyConfig config,
             double tie_tolerance = kDefaultTieTolerance);

  TeleportRecord run(const QuditState& input, Rng& rng) const;

  const SchmidtChannel& channel() const { return channel_; }
  const StrategyConfig& config() const { return config_; }
  /// Empty for the deterministic strategy.
  const std::vector<McStage>& stages() const { return stages_; }
  int max_stages() const { return max_stages_; }

 private:
  void finish_readout(QuditState state, bool shift_only, Rng& rng, TeleportRecord& record) const;

  SchmidtChannel channel_;
  StrategyConfig config_;
  std::vector<McStage> stages_;
  int max_stages_ = 0;
  QuditState resource_;
  DenseOperator inverse_fourier_;
};

TeleportRecord run_protocol(const SchmidtChannel& channel, const QuditState& input,
                            const StrategyConfig& config, Rng& rng);

/// Monte Carlo summary of one bucket of trials.
struct BucketStats {
  std::int64_t count = 0;
  /// count / total trials.
  double frequency = 0.0;
  /// Runs in the bucket that produced a fidelity (all but discarded ones).
  std::int64_t fidelity_samples = 0;
  double mean_fidelity = 0.0;
  double fidelity_stderr = 0.0;
};

struct AggregateStats {
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  /// Deterministic-strategy runs (stage 0).
  BucketStats deterministic;
  /// conclusive[k - 1]: runs that succeeded at stage k.
  std::vector<BucketStats> conclusive;
  /// Runs that exhausted every stage (fallback or discard).
  BucketStats inconclusive;
  /// Empirical probability of a conclusive outcome within the stage budget.
  double p_smc = 0.0;
  /// Mean over every run that delivered a state to Bob.
  double overall_mean_fidelity = 0.0;
  double overall_fidelity_stderr = 0.0;
  std::int64_t overall_fidelity_samples = 0;
};

/// Draws a fresh Haar input per trial and aggregates.
///
/// Trial t uses its own stream seeded from (seed, t), and partial results are
/// reduced in trial order, so the statistics are bit-identical for any
/// worker count.
AggregateStats monte_carlo(const SchmidtChannel& channel, const StrategyConfig& config,
                           std::int64_t trials, std::uint64_t seed, int workers = 1,
                           double tie_tolerance = kDefaultTieTolerance);

/// Stream for trial `trial` of an experiment seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

enum class ConditionKind { kConclusiveAtStage, kOverall, kInconclusive };

struct Condition {
  ConditionKind kind = ConditionKind::kOverall;
  int stage = 0;

  static Condition conclusive_at(int stage) { return {ConditionKind::kConclusiveAtStage, stage}; }
  static Condition overall() { return {ConditionKind::kOverall, 0}; }
  /// Runs that exhausted the stage budget and were finished by the fallback.
  static Condition inconclusive() { return {ConditionKind::kInconclusive, 0}; }
};

/// One measurement branch as a linear map from the unknown state to Bob's
/// corrected state (the correction is omitted on discarded branches).
struct Branch {
  int stage = 0;
  bool conclusive = false;
  bool fallback = false;
  bool discarded = false;
  int alice_l = 0;
  int alice_k = 0;
  DenseOperator op;

  /// Haar-averaged branch probability, tr(op^dag op) / D.
  double probability() const;
};

/// Every branch of the strategy: (filter outcomes) x l' x k'.
std::vector<Branch> enumerate_branches(const SchmidtChannel& channel, const StrategyConfig& config,
                                       double tie_tolerance = kDefaultTieTolerance);

/// Average fidelity conditioned on `condition`, computed without sampling.
///
/// The selected branch operators A_i define a completely positive map whose
/// Choi state, normalized by the selected probability, has overlap
/// f = sum_i |tr A_i|^2 / (D sum_i tr A_i^dag A_i) with the maximally
/// entangled state. The result is (D f + 1) / (D + 1). Throws
/// std::invalid_argument when the condition cannot occur for the channel.
double exact_average_fidelity(const SchmidtChannel& channel, const StrategyConfig& config,
                              const Condition& condition,
                              double tie_tolerance = kDefaultTieTolerance);

/// Total probability of the branches selected by `condition`.
double exact_condition_probability(const SchmidtChannel& channel, const StrategyConfig& config,
                                   const Condition& condition,
                                   double tie_tolerance = kDefaultTieTolerance);

}  // namespace mctele

#endif  // MCTELE_TELEPORT_H
