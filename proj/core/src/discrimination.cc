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

#include "mctele/discrimination.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mctele {

namespace {

// Absolute slack on sum_{j>=k} mu_j - (sum a)^2; both sides are O(D).
constexpr double kUsefulMargin = 1e-12;

void check_sorted(std::span<const double> coeffs, double tie_tolerance, const char* who) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!(coeffs[i] > 0.0)) {
      throw std::invalid_argument(std::string(who) + ": coefficients must be strictly positive");
    }
    if (i > 0 && coeffs[i] > coeffs[i - 1] + tie_tolerance) {
      throw std::invalid_argument(std::string(who) + ": coefficients must be non-increasing");
    }
  }
}

// Number of trailing entries within tie_tolerance of the last (smallest) one.
int smallest_group_size(std::span<const double> coeffs, double tie_tolerance) {
  const double smallest = coeffs.back();
  int count = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend() && *it - smallest <= tie_tolerance; ++it) {
    ++count;
  }
  return count;
}

std::vector<double> drop_smallest_group(std::span<const double> coeffs, int min_group) {
  const int n = static_cast<int>(coeffs.size());
  const double floor_sq = coeffs.back() * coeffs.back();
  std::vector<double> out;
  double total = 0.0;
  for (int k = 0; k < n - min_group; ++k) {
    const double w = coeffs[k] * coeffs[k] - floor_sq;
    out.push_back(w);
    total += w;
  }
  for (double& b : out) {
    b = std::sqrt(b / total);
  }
  return out;
}

McStage make_stage(std::span<const double> coeffs, int dim, int stage_index, int min_group) {
  const int n = static_cast<int>(coeffs.size());
  if (n < 2) {
    throw std::invalid_argument("mc_stage: support of size " + std::to_string(n) +
                                " carries no information");
  }
  if (n > dim) {
    throw std::invalid_argument("mc_stage: support larger than the qudit dimension");
  }
  McStage stage;
  stage.stage_index = stage_index;
  stage.input_coeffs.assign(coeffs.begin(), coeffs.end());
  stage.success_op = DenseOperator::Zero(dim, dim);
  stage.failure_op = DenseOperator::Identity(dim, dim);
  stage.success_coeffs.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));

  const double a_min = coeffs.back();
  for (int k = 0; k < n; ++k) {
    if (k >= n - min_group) {
      stage.success_op(k, k) = 1.0;
      stage.failure_op(k, k) = 0.0;
    } else {
      const double ratio = a_min / coeffs[k];
      stage.success_op(k, k) = ratio;
      stage.failure_op(k, k) = std::sqrt(1.0 - ratio * ratio);
    }
  }
  if (min_group == n) {
    stage.terminal = true;
    stage.p_fail = 0.0;
  } else {
    stage.p_fail = 1.0 - n * a_min * a_min;
    stage.failure_coeffs = drop_smallest_group(coeffs, min_group);
  }
  return stage;
}

}  // namespace

std::vector<double> MeMeasurement::outcome_probabilities(const QuditState& state) const {
  if (state.num_subsystems() != 1 || state.dim(0) != rotation.rows()) {
    throw std::invalid_argument("MeMeasurement: expected a single qudit of matching dimension");
  }
  Eigen::VectorXcd rotated = rotation * state.amplitudes();
  std::vector<double> probs(rotated.size());
  for (Eigen::Index l = 0; l < rotated.size(); ++l) {
    probs[l] = std::norm(rotated[l]);
  }
  return probs;
}

MeMeasurement me_measurement(int dim) {
  return MeMeasurement{fourier(dim).adjoint(), true};
}

double me_correct_probability(std::span<const double> coeffs, int dim) {
  double sum = 0.0;
  for (double a : coeffs) {
    sum += a;
  }
  return sum * sum / dim;
}

McStage mc_stage(std::span<const double> input_coeffs, int dim, int stage_index,
                 double tie_tolerance) {
  if (input_coeffs.size() < 2) {
    throw std::invalid_argument("mc_stage: support of size " +
                                std::to_string(input_coeffs.size()) + " carries no information");
  }
  check_sorted(input_coeffs, tie_tolerance, "mc_stage");
  return make_stage(input_coeffs, dim, stage_index,
                    smallest_group_size(input_coeffs, tie_tolerance));
}

std::vector<double> failure_coefficients(std::span<const double> coeffs, double tie_tolerance) {
  if (coeffs.empty()) {
    throw std::invalid_argument("failure_coefficients: empty coefficient list");
  }
  check_sorted(coeffs, tie_tolerance, "failure_coefficients");
  const int min_group = smallest_group_size(coeffs, tie_tolerance);
  if (min_group == static_cast<int>(coeffs.size())) {
    throw std::invalid_argument("failure_coefficients: all coefficients are equal");
  }
  return drop_smallest_group(coeffs, min_group);
}

double confidence_at_stage(const MultiplicityProfile& profile, int dim, int stage) {
  if (stage < 1 || stage > profile.max_stages) {
    throw std::invalid_argument("confidence_at_stage: stage " + std::to_string(stage) +
                                " outside 1.." + std::to_string(profile.max_stages));
  }
  return static_cast<double>(profile.tail_multiplicity(stage)) / dim;
}

bool stage_is_useful(const MultiplicityProfile& profile, int stage) {
  if (profile.d <= 1) {
    return false;
  }
  double sum = 0.0;
  for (const auto& g : profile.groups) {
    sum += g.multiplicity * g.value;
  }
  return profile.tail_multiplicity(stage) - sum * sum > kUsefulMargin;
}

StagePlan build_stage_plan(const SchmidtChannel& channel, double tie_tolerance) {
  if (channel.rank() < 2) {
    throw std::invalid_argument("build_stage_plan: a rank-one channel admits no discrimination");
  }
  MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  StagePlan plan{channel, profile, {}, profile.max_stages, {}};

  std::vector<double> coeffs = grouped_coefficients(profile);
  for (int k = 1; k <= profile.max_stages; ++k) {
    McStage stage = make_stage(coeffs, channel.dim(), k, profile.multiplicity(k));
    coeffs = stage.failure_coeffs;
    plan.stages.push_back(std::move(stage));
    plan.useful.push_back(stage_is_useful(profile, k));
  }
  return plan;
}

}  // namespace mctele
