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

#ifndef MCTELE_DISCRIMINATION_H
#define MCTELE_DISCRIMINATION_H

#include <span>
#include <vector>

#include "mctele/channel.h"
#include "mctele/qudit.h"

namespace mctele {

/// Minimum-error measurement for D equally likely symmetric states: rotate by
/// the inverse Fourier transform, then read out in the computational basis.
struct MeMeasurement {
  DenseOperator rotation;
  bool computational_readout = true;

  /// Outcome distribution for a single-qudit state.
  std::vector<double> outcome_probabilities(const QuditState& state) const;
};

MeMeasurement me_measurement(int dim);

/// (sum_m a_m)^2 / D: probability of a correct minimum-error guess, which is
/// also its confidence.
double me_correct_probability(std::span<const double> coeffs, int dim);

/// One maximum-confidence filtering stage as a diagonal Kraus pair.
///
/// On a support index k the success operator has entry a_min / a_k and the
/// failure operator sqrt(1 - a_min^2 / a_k^2). Off the support the success
/// entry is 0 and the failure entry is 1. The success branch maps the
/// symmetric family onto the uniform family; the failure branch maps it onto
/// the family built from `failure_coeffs`.
struct McStage {
  int stage_index = 1;
  std::vector<double> input_coeffs;
  DenseOperator success_op;
  DenseOperator failure_op;
  double p_fail = 0.0;
  std::vector<double> success_coeffs;
  std::vector<double> failure_coeffs;
  /// No failure branch: all input coefficients are equal.
  bool terminal = false;

  int support_size() const { return static_cast<int>(input_coeffs.size()); }
};

/// Builds a stage for a sorted (non-increasing) coefficient list of support
/// size at least 2. Coefficients within `tie_tolerance` of the minimum form
/// the filtered-out group. Throws std::invalid_argument for a support of one.
McStage mc_stage(std::span<const double> input_coeffs, int dim, int stage_index,
                 double tie_tolerance = kDefaultTieTolerance);

/// Renormalized sqrt(a_k^2 - a_min^2) for every coefficient outside the
/// smallest group, largest first. Throws if all coefficients are equal.
std::vector<double> failure_coefficients(std::span<const double> coeffs,
                                         double tie_tolerance = kDefaultTieTolerance);

/// Confidence of a conclusive outcome at stage k: (sum_{j >= k} mu_j) / D.
double confidence_at_stage(const MultiplicityProfile& profile, int dim, int stage);

/// The full sequential measurement a channel admits.
struct StagePlan {
  SchmidtChannel channel;
  MultiplicityProfile profile;
  std::vector<McStage> stages;
  int max_stages = 0;
  /// Stage k beats the deterministic protocol: sum_{j >= k} mu_j > (sum a)^2.
  std::vector<bool> useful;
};

/// Chains mc_stage through the multiplicity groups of the channel. Stage
/// inputs are the group values, so ties decided here carry through every
/// later stage. Throws std::invalid_argument for a rank-one channel.
StagePlan build_stage_plan(const SchmidtChannel& channel,
                           double tie_tolerance = kDefaultTieTolerance);

/// Shared strict comparison for the useful-stage test.
bool stage_is_useful(const MultiplicityProfile& profile, int stage);

}  // namespace mctele

#endif  // MCTELE_DISCRIMINATION_H
