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

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "reference.h"

using namespace mctele;
namespace ref = mctele::reference;

namespace {

SchmidtChannel example() { return make_channel_from_squares(4, {0.5, 0.3, 0.2}); }

}  // namespace

TEST(analytics, example_channel_values) {
  const SchmidtChannel ch = example();
  EXPECT_NEAR(mc_conclusive_fidelity(ch, 1), 0.8, 1e-15);
  EXPECT_NEAR(mc_conclusive_fidelity(ch, 2), 0.6, 1e-15);
  EXPECT_NEAR(mc_last_stage_fidelity(ch), 0.6, 1e-15);
  EXPECT_NEAR(classical_fidelity(4), 0.4, 1e-15);
  const double s = std::sqrt(0.5) + std::sqrt(0.3) + std::sqrt(0.2);
  EXPECT_NEAR(me_fidelity(ch), (1 + s * s) / 5, 1e-15);
  EXPECT_NEAR(me_singlet_fraction(ch), s * s / 4, 1e-15);
  EXPECT_NEAR(mc_singlet_fraction(ch, 1), 0.75, 1e-15);
  const StageProbabilities p = stage_probabilities(ch, 2);
  EXPECT_NEAR(p.p_fail[0], 0.4, 1e-15);
  EXPECT_NEAR(p.p_fail[1], 0.5, 1e-15);
  EXPECT_NEAR(p.p_success[0], 0.6, 1e-15);
  EXPECT_NEAR(p.p_success[1], 0.2, 1e-15);
  EXPECT_NEAR(p.p_overall, 0.8, 1e-15);
  EXPECT_NEAR(p.p_exhausted, 0.2, 1e-15);
  // Failure coefficients [sqrt .75, sqrt .25].
  const double t = std::sqrt(0.75) + std::sqrt(0.25);
  EXPECT_NEAR(me_after_fail_fidelity(ch), (1 + t * t) / 5, 1e-14);
  EXPECT_NEAR(me_after_fail_fidelity_literal(ch), (1 + t * t) / 5, 1e-14);
}

TEST(analytics, limiting_channels) {
  for (int d = 2; d <= 6; ++d) {
    const SchmidtChannel flat = make_channel(d, std::vector<double>(d, 1.0 / std::sqrt(double(d))));
    EXPECT_NEAR(me_fidelity(flat), 1.0, 1e-14);
    EXPECT_NEAR(mc_conclusive_fidelity(flat, 1), 1.0, 1e-14);
    const SchmidtChannel product = make_channel(d, {1.0});
    EXPECT_NEAR(me_fidelity(product), 2.0 / (d + 1), 1e-15);
    EXPECT_NEAR(mc_conclusive_fidelity(product, 1), 2.0 / (d + 1), 1e-15);
    const ChannelReport r = channel_report(product);
    EXPECT_EQ(r.max_stages, 0);
    ASSERT_EQ(r.stage_rows(), 1);
    EXPECT_EQ(r.p_fail[0], 0.0);
    EXPECT_TRUE(std::isnan(r.f_me_after_fail));
  }
}

TEST(analytics, closed_forms_match_reference_register) {
  Rng rng(77);
  int checked = 0;
  while (checked < 60) {
    const SchmidtChannel ch = ref::random_channel(rng, 6);
    const int dim = ch.dim();
    const auto det = ref::branches(dim, ch.coeffs(), 0, Fallback::kMe);
    ASSERT_NEAR(me_fidelity(ch), ref::average_fidelity(det, [](auto&) { return true; }), 1e-9);
    if (ch.rank() < 2) {
      continue;
    }
    ++checked;
    const int m = multiplicity_profile(ch).max_stages;
    for (Fallback f : {Fallback::kMe, Fallback::kGuess, Fallback::kDiscard}) {
      for (int k_max = 1; k_max <= m; ++k_max) {
        const auto r = ref::branches(dim, ch.coeffs(), k_max, f);
        const StageProbabilities p = stage_probabilities(ch, k_max);
        for (int k = 1; k <= k_max; ++k) {
          const auto at_k = [k](const ref::RefBranch& b) { return b.stage == k; };
          ASSERT_NEAR(mc_conclusive_fidelity(ch, k), ref::average_fidelity(r, at_k), 1e-9);
          ASSERT_NEAR(p.p_success[k - 1], ref::probability(r, at_k), 1e-9);
        }
        const auto exhausted = [](const ref::RefBranch& b) { return b.stage == -1; };
        ASSERT_NEAR(p.p_exhausted, ref::probability(r, exhausted), 1e-9);
        if (f == Fallback::kMe && p.p_exhausted > 1e-9) {
          ASSERT_NEAR(me_fallback_fidelity(ch, k_max), ref::average_fidelity(r, exhausted), 1e-9);
        }
        const auto delivered = [](const ref::RefBranch& b) { return !b.discarded; };
        ASSERT_NEAR(overall_fidelity(ch, StrategyConfig::sequential_mc(k_max, f)),
                    ref::average_fidelity(r, delivered), 1e-9)
            << to_string(f) << " k_max=" << k_max;
      }
    }
  }
}

TEST(analytics, after_fail_forms_and_bound) {
  Rng rng(78);
  for (int trial = 0; trial < 200; ++trial) {
    const SchmidtChannel ch = ref::random_channel(rng, 7);
    if (ch.rank() < 2) {
      continue;
    }
    EXPECT_NEAR(me_after_fail_fidelity(ch), me_after_fail_fidelity_literal(ch), 1e-12);
    EXPECT_NEAR(me_after_fail_fidelity(ch), me_fallback_fidelity(ch, 1), 1e-12);
    EXPECT_LE(me_after_fail_fidelity(ch), me_fidelity(ch) + 1e-12);
    EXPECT_NEAR(overall_fidelity(ch, StrategyConfig::sequential_mc(1, Fallback::kMe)),
                overall_me_literal(ch), 1e-12);
    const int m = multiplicity_profile(ch).max_stages;
    EXPECT_NEAR(overall_fidelity(ch, StrategyConfig::sequential_mc(m, Fallback::kMe)),
                overall_smc_literal(ch), 1e-12);
  }
}

TEST(analytics, probabilities_are_conserved) {
  Rng rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    const SchmidtChannel ch = ref::random_channel(rng, 8);
    if (ch.rank() < 2) {
      continue;
    }
    const int m = multiplicity_profile(ch).max_stages;
    const StageProbabilities p = stage_probabilities(ch, m);
    double total = p.p_exhausted;
    double fail = 1.0;
    for (int k = 0; k < m; ++k) {
      total += p.p_success[k];
      fail *= p.p_fail[k];
      EXPECT_GE(p.p_fail[k], 0.0);
      EXPECT_LE(p.p_fail[k], 1.0);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(p.p_exhausted, fail, 1e-12);
  }
}

TEST(analytics, ordering_chain_on_three_coefficients) {
  // F_mc_1 >= F_me >= overall (one stage, ME finish) >= overall (all stages).
  Rng rng(80);
  for (int trial = 0; trial < 500; ++trial) {
    const SchmidtChannel ch = ref::random_channel(rng, 4, 3);
    const ChannelReport r = channel_report(ch);
    EXPECT_GE(r.f_mc_s[0], r.f_me - 1e-12);
    EXPECT_GE(r.f_me, r.overall_me - 1e-12);
    EXPECT_GE(r.overall_me, r.overall_smc - 1e-12);
  }
}

TEST(analytics, report_examples) {
  // d = 2, largest unique: M = 1.
  const ChannelReport one = channel_report(make_channel_from_squares(3, {0.6, 0.2, 0.2}));
  EXPECT_EQ(one.d, 2);
  EXPECT_EQ(one.max_stages, 1);
  ASSERT_EQ(one.useful.size(), 1u);
  EXPECT_TRUE(one.useful[0]);
  EXPECT_NEAR(one.f_mc_s[0], 1.0, 1e-15);

  const ChannelReport two = channel_report(example());
  EXPECT_EQ(two.max_stages, 2);
  EXPECT_EQ(two.useful, (std::vector<bool>{true, false}));
  EXPECT_NEAR(two.overall_smc, 0.68, 1e-12);
  EXPECT_NEAR(two.overall_me, 0.709282032302755, 1e-12);
}

TEST(analytics, overall_variants) {
  const SchmidtChannel ch = example();
  EXPECT_NEAR(overall_fidelity(ch, StrategyConfig::sequential_mc(1, Fallback::kGuess)), 0.64,
              1e-12);
  EXPECT_NEAR(overall_fidelity(ch, StrategyConfig::sequential_mc(2, Fallback::kDiscard)), 0.75,
              1e-12);
  EXPECT_NEAR(overall_fidelity(ch, StrategyConfig::deterministic_me()), me_fidelity(ch), 1e-15);
  EXPECT_THROW(overall_fidelity(ch, StrategyConfig::sequential_mc(3, Fallback::kMe)),
               std::invalid_argument);
  EXPECT_THROW(me_fallback_fidelity(ch, 3), std::invalid_argument);
  EXPECT_THROW(mc_conclusive_fidelity(ch, 0), std::invalid_argument);
}

TEST(analytics, report_csv_round_trip) {
  Rng rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    const ChannelReport r = channel_report(ref::random_channel(rng, 6));
    std::stringstream ss;
    write_report_csv(ss, r, {"seed=81"});
    const ChannelReport back = read_report_csv(ss);
    EXPECT_EQ(back.dim, r.dim);
    EXPECT_EQ(back.rank, r.rank);
    EXPECT_EQ(back.max_stages, r.max_stages);
    EXPECT_EQ(back.useful, r.useful);
    ASSERT_EQ(back.stage_rows(), r.stage_rows());
    for (int k = 0; k < r.stage_rows(); ++k) {
      EXPECT_NEAR(back.f_mc_s[k], r.f_mc_s[k], 1e-14);
      EXPECT_NEAR(back.p_success[k], r.p_success[k], 1e-14);
    }
    EXPECT_NEAR(back.overall_smc, r.overall_smc, 1e-14);
    EXPECT_EQ(std::isnan(back.f_me_after_fail), std::isnan(r.f_me_after_fail));
  }
  std::stringstream bad("quantity,stage,value\nF_me,,0.5\nbogus,,1\n");
  try {
    read_report_csv(bad);
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(analytics, format_double_uses_fifteen_digits) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333333");
}
