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

#include "mctele/analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mctele/discrimination.h"

namespace mctele {

namespace {

constexpr double kIdentityTolerance = 1e-12;

// Stage rows reported for a channel: M, or the single trivial stage of a
// rank-one channel.
int stage_count(const MultiplicityProfile& profile) {
  return profile.max_stages > 0 ? profile.max_stages : 1;
}

void check_stage(const MultiplicityProfile& profile, int stage, const char* who) {
  if (stage < 1 || stage > stage_count(profile)) {
    throw std::invalid_argument(std::string(who) + ": stage " + std::to_string(stage) +
                                " outside 1.." + std::to_string(stage_count(profile)));
  }
}

double coefficient_sum(const MultiplicityProfile& profile) {
  double sum = 0.0;
  for (const auto& g : profile.groups) {
    sum += g.multiplicity * g.value;
  }
  return sum;
}

// Probability that the first k stages all fail, before renormalization:
// sum_{i>k} mu_i (v_i^2 - v_k^2), with the k = 0 value fixed at 1.
double residual_weight(const MultiplicityProfile& profile, int k) {
  if (k == 0) {
    return 1.0;
  }
  if (k == 1) {
    const double v = profile.value(1);
    return std::max(0.0, 1.0 - profile.rank() * v * v);
  }
  const double vk = profile.value(k);
  double r = 0.0;
  for (int i = k + 1; i <= profile.d; ++i) {
    r += profile.multiplicity(i) * (profile.value(i) * profile.value(i) - vk * vk);
  }
  return r;
}

double fail_probability(const MultiplicityProfile& profile, int k) {
  if (k >= profile.d) {
    return 0.0;
  }
  return residual_weight(profile, k) / residual_weight(profile, k - 1);
}

double direct_fidelity(const MultiplicityProfile& profile, int dim, int stage) {
  return (1.0 + profile.tail_multiplicity(stage)) / (dim + 1.0);
}

double recursive_fidelity(const MultiplicityProfile& profile, int dim, int stage) {
  double f = (profile.rank() + 1.0) / (dim + 1.0);
  for (int k = 2; k <= stage; ++k) {
    f -= profile.multiplicity(k - 1) / (dim + 1.0);
  }
  return f;
}

double fallback_fidelity(const MultiplicityProfile& profile, int dim, int after) {
  const double r = residual_weight(profile, after);
  const double vk = profile.value(after);
  double sum = 0.0;
  for (int i = after + 1; i <= profile.d; ++i) {
    sum += profile.multiplicity(i) *
           std::sqrt((profile.value(i) * profile.value(i) - vk * vk) / r);
  }
  return (1.0 + sum * sum) / (dim + 1.0);
}

StageProbabilities probabilities(const MultiplicityProfile& profile, int stage) {
  StageProbabilities out;
  double survive = 1.0;
  for (int k = 1; k <= stage; ++k) {
    const double pf = fail_probability(profile, k);
    out.p_fail.push_back(pf);
    out.p_success.push_back((1.0 - pf) * survive);
    out.p_overall += out.p_success.back();
    survive *= pf;
  }
  out.p_exhausted = survive;
  return out;
}

double overall(const MultiplicityProfile& profile, int dim, int stage, Fallback fallback) {
  const StageProbabilities probs = probabilities(profile, stage);
  double sum = 0.0;
  for (int k = 1; k <= stage; ++k) {
    sum += probs.p_success[k - 1] * direct_fidelity(profile, dim, k);
  }
  const double rest = probs.p_exhausted;
  switch (fallback) {
    case Fallback::kDiscard:
      return sum / (1.0 - rest);
    case Fallback::kGuess:
      return sum + rest * classical_fidelity(dim);
    case Fallback::kMe:
      if (stage >= profile.d || rest == 0.0) {
        return sum;
      }
      return sum + rest * fallback_fidelity(profile, dim, stage);
  }
  throw std::logic_error("overall_fidelity: unknown fallback");
}

double cross_sum(const MultiplicityProfile& profile) {
  const std::vector<double> a = grouped_coefficients(profile);
  const double floor_sq = profile.value(1) * profile.value(1);
  double sum = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    for (std::size_t mp = 0; mp < a.size(); ++mp) {
      if (m != mp) {
        sum += std::sqrt((a[m] * a[m] - floor_sq) * (a[mp] * a[mp] - floor_sq));
      }
    }
  }
  return sum;
}

void expect_close(double a, double b, const std::string& what) {
  if (!(std::abs(a - b) <= kIdentityTolerance)) {
    throw std::logic_error("channel_report: " + what + " mismatch (" + format_double(a) +
                           " vs " + format_double(b) + ")");
  }
}

}  // namespace

double me_fidelity(const SchmidtChannel& channel, double tie_tolerance) {
  const double s = coefficient_sum(multiplicity_profile(channel, tie_tolerance));
  return (1.0 + s * s) / (channel.dim() + 1.0);
}

double me_singlet_fraction(const SchmidtChannel& channel, double tie_tolerance) {
  const double s = coefficient_sum(multiplicity_profile(channel, tie_tolerance));
  return s * s / channel.dim();
}

double classical_fidelity(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("classical_fidelity: dimension must be at least 2");
  }
  return 2.0 / (dim + 1.0);
}

double mc_conclusive_fidelity_recursive(const SchmidtChannel& channel, int stage,
                                        double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  check_stage(profile, stage, "mc_conclusive_fidelity");
  return recursive_fidelity(profile, channel.dim(), stage);
}

double mc_conclusive_fidelity_direct(const SchmidtChannel& channel, int stage,
                                     double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  check_stage(profile, stage, "mc_conclusive_fidelity");
  return direct_fidelity(profile, channel.dim(), stage);
}

double mc_conclusive_fidelity(const SchmidtChannel& channel, int stage, double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  check_stage(profile, stage, "mc_conclusive_fidelity");
  const double direct = direct_fidelity(profile, channel.dim(), stage);
  const double recursive = recursive_fidelity(profile, channel.dim(), stage);
  if (std::abs(direct - recursive) > kIdentityTolerance) {
    throw std::logic_error("mc_conclusive_fidelity: recursive and direct forms disagree at stage " +
                           std::to_string(stage));
  }
  return direct;
}

double mc_last_stage_fidelity(const SchmidtChannel& channel, double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  const int d = profile.d;
  const int mu_d = profile.multiplicity(d);
  const int mu_prev = d >= 2 ? profile.multiplicity(d - 1) : 0;
  return ((mu_d == 1 ? mu_prev : 0) + mu_d + 1.0) / (channel.dim() + 1.0);
}

double mc_singlet_fraction(const SchmidtChannel& channel, int stage, double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  check_stage(profile, stage, "mc_singlet_fraction");
  return static_cast<double>(profile.tail_multiplicity(stage)) / channel.dim();
}

double me_after_fail_fidelity(const SchmidtChannel& channel, double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  if (profile.d < 2) {
    throw std::invalid_argument("me_after_fail_fidelity: all coefficients are equal");
  }
  const std::vector<double> grouped = grouped_coefficients(profile);
  const std::vector<double> b = failure_coefficients(grouped, tie_tolerance);
  double sum = 0.0;
  for (double x : b) {
    sum += x;
  }
  return (1.0 + sum * sum) / (channel.dim() + 1.0);
}

double me_after_fail_fidelity_literal(const SchmidtChannel& channel, double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  if (profile.d < 2) {
    throw std::invalid_argument("me_after_fail_fidelity: all coefficients are equal");
  }
  const double scale = (channel.dim() + 1.0) * residual_weight(profile, 1);
  return classical_fidelity(channel.dim()) + cross_sum(profile) / scale;
}

double me_fallback_fidelity(const SchmidtChannel& channel, int after_stage,
                            double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  if (after_stage < 1 || after_stage >= profile.d) {
    throw std::invalid_argument("me_fallback_fidelity: no failure states after stage " +
                                std::to_string(after_stage));
  }
  return fallback_fidelity(profile, channel.dim(), after_stage);
}

StageProbabilities stage_probabilities(const SchmidtChannel& channel, int stage,
                                       double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  check_stage(profile, stage, "stage_probabilities");
  return probabilities(profile, stage);
}

double overall_fidelity(const SchmidtChannel& channel, const StrategyConfig& config,
                        double tie_tolerance) {
  if (config.kind == StrategyKind::kDeterministicMe) {
    return me_fidelity(channel, tie_tolerance);
  }
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  if (config.k_max < 1 || config.k_max > profile.max_stages) {
    throw std::invalid_argument("overall_fidelity: k_max " + std::to_string(config.k_max) +
                                " unreachable, channel allows " +
                                std::to_string(profile.max_stages) + " stages");
  }
  return overall(profile, channel.dim(), config.k_max, config.fallback);
}

double overall_me_literal(const SchmidtChannel& channel, double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  const int n = profile.rank();
  const double v = profile.value(1);
  const double dp1 = channel.dim() + 1.0;
  return classical_fidelity(channel.dim()) + n * v * v * (n - 1) / dp1 + cross_sum(profile) / dp1;
}

double overall_smc_literal(const SchmidtChannel& channel, double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  const StageProbabilities probs = probabilities(profile, profile.max_stages);
  double sum = 0.0;
  for (int k = 1; k <= profile.max_stages; ++k) {
    sum += probs.p_success[k - 1] * direct_fidelity(profile, channel.dim(), k);
  }
  if (profile.multiplicity(profile.d) == 1) {
    sum += (1.0 - probs.p_overall) * classical_fidelity(channel.dim());
  }
  return sum;
}

ChannelReport channel_report(const SchmidtChannel& channel, double tie_tolerance) {
  const MultiplicityProfile profile = multiplicity_profile(channel, tie_tolerance);
  const int dim = channel.dim();
  const int rows = stage_count(profile);

  ChannelReport r;
  r.dim = dim;
  r.rank = profile.rank();
  r.d = profile.d;
  r.max_stages = profile.max_stages;
  r.f_me = me_fidelity(channel, tie_tolerance);
  r.singlet_me = me_singlet_fraction(channel, tie_tolerance);
  r.f_clas = classical_fidelity(dim);

  expect_close((r.f_me * (dim + 1) - 1) / dim, r.singlet_me, "deterministic singlet fraction");
  expect_close(r.singlet_me, me_correct_probability(grouped_coefficients(profile), dim),
               "deterministic confidence");

  const StageProbabilities probs = probabilities(profile, rows);
  double survive = 1.0;
  double cumulative = 0.0;
  for (int k = 1; k <= rows; ++k) {
    const double f = mc_conclusive_fidelity(channel, k, tie_tolerance);
    const double singlet = static_cast<double>(profile.tail_multiplicity(k)) / dim;
    r.f_mc_s.push_back(f);
    r.singlet_mc_s.push_back(singlet);
    r.p_fail.push_back(probs.p_fail[k - 1]);
    r.p_success.push_back(probs.p_success[k - 1]);
    survive *= probs.p_fail[k - 1];
    cumulative += probs.p_success[k - 1];
    r.p_smc_overall.push_back(1.0 - survive);
    r.useful.push_back(stage_is_useful(profile, k));

    const std::string at = " at stage " + std::to_string(k);
    expect_close((f * (dim + 1) - 1) / dim, singlet, "conclusive singlet fraction" + at);
    if (profile.max_stages > 0) {
      expect_close(singlet, confidence_at_stage(profile, dim, k), "conclusive confidence" + at);
    }
    expect_close(cumulative, r.p_smc_overall.back(), "cumulative success probability" + at);
    if (std::abs(f - r.f_me) > kIdentityTolerance && r.useful.back() != (f > r.f_me)) {
      throw std::logic_error("channel_report: useful flag disagrees with fidelities" + at);
    }
  }
  expect_close(r.f_mc_s.back(), mc_last_stage_fidelity(channel, tie_tolerance),
               "last-stage fidelity");

  if (profile.d >= 2) {
    r.f_me_after_fail = me_after_fail_fidelity(channel, tie_tolerance);
    expect_close(r.f_me_after_fail, me_after_fail_fidelity_literal(channel, tie_tolerance),
                 "fidelity after failure");
  } else {
    r.f_me_after_fail = std::numeric_limits<double>::quiet_NaN();
  }

  r.overall_me = overall(profile, dim, 1, Fallback::kMe);
  expect_close(r.overall_me, overall_me_literal(channel, tie_tolerance),
               "overall fidelity with minimum-error finish");
  r.overall_smc = overall(profile, dim, rows, Fallback::kMe);
  expect_close(r.overall_smc, overall_smc_literal(channel, tie_tolerance),
               "overall fidelity over every stage");

  for (double p : r.p_fail) {
    if (p < -kIdentityTolerance || p > 1.0 + kIdentityTolerance) {
      throw std::logic_error("channel_report: failure probability outside [0, 1]");
    }
  }
  return r;
}

}  // namespace mctele
