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

#include "gtest/gtest.h"
#include "reference.h"

using namespace mctele;
namespace ref = mctele::reference;

namespace {

// Probability that the Fourier readout names the right member of the
// normalized family sum_k c_k omega^{lk} |k>, averaged over a uniform prior.
double readout_success(const std::vector<double>& c, int dim) {
  const ref::Matrix fdag = ref::dft(dim).adjoint();
  double total = 0.0;
  for (int l = 0; l < dim; ++l) {
    ref::Vector v = ref::symmetric_state(c, dim, l);
    v.normalize();
    total += std::norm((fdag * v)[l]);
  }
  return total / dim;
}

}  // namespace

TEST(discrimination, three_coefficient_example) {
  const std::vector<double> a{std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2)};
  const McStage s = mc_stage(a, 4, 1);
  EXPECT_NEAR(s.p_fail, 0.4, 1e-15);
  ASSERT_EQ(s.failure_coeffs.size(), 2u);
  EXPECT_NEAR(s.failure_coeffs[0], std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(s.failure_coeffs[1], std::sqrt(0.25), 1e-15);
  EXPECT_EQ(s.support_size(), 3);
  EXPECT_FALSE(s.terminal);

  const McStage t = mc_stage(s.failure_coeffs, 4, 2);
  EXPECT_NEAR(t.p_fail, 1.0 - 2 * 0.25, 1e-15);
  EXPECT_EQ(t.failure_coeffs.size(), 1u);
}

TEST(discrimination, kraus_pair_is_complete) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    SchmidtChannel ch = ref::random_channel(rng, 7);
    if (ch.rank() < 2) {
      continue;
    }
    const StagePlan plan = build_stage_plan(ch);
    for (const McStage& s : plan.stages) {
      const DenseOperator sum =
          s.success_op.adjoint() * s.success_op + s.failure_op.adjoint() * s.failure_op;
      EXPECT_LT((sum - DenseOperator::Identity(ch.dim(), ch.dim())).norm(), 1e-12);
    }
  }
}

TEST(discrimination, branch_images_are_the_next_families) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = std::uniform_int_distribution<int>(3, 6)(rng);
    SchmidtChannel ch = ref::random_channel(rng, dim, dim);
    const StagePlan plan = build_stage_plan(ch);
    const auto inputs = ref::stage_inputs(ch.coeffs());
    for (int k = 0; k < plan.max_stages; ++k) {
      const McStage& s = plan.stages[k];
      for (int n = 0; n < s.support_size(); ++n) {
        ASSERT_NEAR(s.input_coeffs[n], inputs[k][n], 1e-12);
      }
      for (int l = 0; l < dim; ++l) {
        const ref::Vector in = ref::symmetric_state(s.input_coeffs, dim, l);
        ref::Vector ok = s.success_op * in;
        ok.normalize();
        EXPECT_LT((ok - ref::symmetric_state(s.success_coeffs, dim, l)).norm(), 1e-12);
        if (!s.terminal) {
          ref::Vector bad = s.failure_op * in;
          bad.normalize();
          EXPECT_LT((bad - ref::symmetric_state(inputs[k + 1], dim, l)).norm(), 1e-12);
          // Failure probability averaged over the family.
          EXPECT_NEAR((s.failure_op * in).squaredNorm(), s.p_fail, 1e-12);
        }
      }
    }
  }
}

TEST(discrimination, confidence_matches_readout_oracle) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    SchmidtChannel ch = ref::random_channel(rng, 6);
    if (ch.rank() < 2) {
      continue;
    }
    const StagePlan plan = build_stage_plan(ch);
    for (int k = 1; k <= plan.max_stages; ++k) {
      EXPECT_NEAR(confidence_at_stage(plan.profile, ch.dim(), k),
                  readout_success(plan.stages[k - 1].success_coeffs, ch.dim()), 1e-12);
    }
    EXPECT_NEAR(me_correct_probability(ch.coeffs(), ch.dim()),
                readout_success(ch.coeffs(), ch.dim()), 1e-12);
  }
}

TEST(discrimination, me_measurement_is_inverse_fourier) {
  const MeMeasurement m = me_measurement(5);
  EXPECT_LT((m.rotation - ref::dft(5).adjoint()).norm(), 1e-12);
  const std::vector<double> c{0.8, 0.6};
  ref::Vector v = ref::symmetric_state(c, 5, 2);
  const auto p = m.outcome_probabilities(QuditState({5}, v));
  double sum = 0.0;
  for (double x : p) {
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
  EXPECT_THROW(m.outcome_probabilities(QuditState::basis({3}, 0)), std::invalid_argument);
}

TEST(discrimination, ties_in_smallest_group) {
  const std::vector<double> a{std::sqrt(0.6), std::sqrt(0.2), std::sqrt(0.2)};
  const McStage s = mc_stage(a, 3, 1);
  EXPECT_NEAR(s.p_fail, 1.0 - 3 * 0.2, 1e-15);
  EXPECT_EQ(s.failure_coeffs.size(), 1u);
  EXPECT_NEAR(s.failure_op(1, 1).real(), 0.0, 0.0);

  const std::vector<double> flat(3, 1.0 / std::sqrt(3.0));
  const McStage f = mc_stage(flat, 3, 1);
  EXPECT_TRUE(f.terminal);
  EXPECT_EQ(f.p_fail, 0.0);
  EXPECT_THROW(failure_coefficients(flat), std::invalid_argument);
}

TEST(discrimination, rejects_bad_stage_input) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(mc_stage(one, 3, 1), std::invalid_argument);
  const std::vector<double> rising{0.6, 0.8};
  EXPECT_THROW(mc_stage(rising, 3, 1), std::invalid_argument);
  const std::vector<double> too_long{0.5, 0.5, 0.5, 0.5};
  EXPECT_THROW(mc_stage(too_long, 3, 1), std::invalid_argument);
  EXPECT_THROW(build_stage_plan(make_channel(3, {1.0})), std::invalid_argument);
  const MultiplicityProfile p = multiplicity_profile(rising);
  EXPECT_THROW(confidence_at_stage(p, 3, 0), std::invalid_argument);
  EXPECT_THROW(confidence_at_stage(p, 3, 2), std::invalid_argument);
}

TEST(discrimination, usefulness_examples) {
  // (sum a)^2 for [sqrt .5, sqrt .3, sqrt .2] is about 2.92: only stage 1 (tail 3) beats it.
  const StagePlan plan =
      build_stage_plan(make_channel_from_squares(4, {0.5, 0.3, 0.2}));
  ASSERT_EQ(plan.useful.size(), 2u);
  EXPECT_TRUE(plan.useful[0]);
  EXPECT_FALSE(plan.useful[1]);
  // Equal coefficients: nothing to gain.
  const std::vector<double> flat(3, 1.0 / std::sqrt(3.0));
  EXPECT_FALSE(stage_is_useful(multiplicity_profile(flat), 1));
}
