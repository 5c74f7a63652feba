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

#include "mctele/teleport.h"

#include <cmath>

#include "gtest/gtest.h"
#include "reference.h"

using namespace mctele;
namespace ref = mctele::reference;

namespace {

const Branch& find_branch(const std::vector<Branch>& all, const TeleportRecord& r) {
  for (const Branch& b : all) {
    if (b.stage == r.stage_reached && b.conclusive == r.conclusive && b.alice_l == r.alice_l &&
        b.alice_k == r.alice_k) {
      return b;
    }
  }
  throw std::logic_error("no matching branch");
}

bool is_delivered(const ref::RefBranch& b) { return !b.discarded; }

}  // namespace

TEST(teleport, readout_bits) {
  EXPECT_EQ(readout_message_bits(2), 2);
  EXPECT_EQ(readout_message_bits(3), 4);
  EXPECT_EQ(readout_message_bits(4), 4);
  EXPECT_EQ(readout_message_bits(5), 6);
}

TEST(teleport, fallback_names_round_trip) {
  for (Fallback f : {Fallback::kDiscard, Fallback::kMe, Fallback::kGuess}) {
    EXPECT_EQ(parse_fallback(to_string(f)), f);
  }
  EXPECT_THROW(parse_fallback("retry"), std::invalid_argument);
}

TEST(teleport, deterministic_record_fields) {
  SchmidtChannel ch = make_channel_from_squares(4, {0.5, 0.3, 0.2});
  Rng rng(1);
  const QuditState phi = haar_random_state(4, rng);
  const TeleportRecord r = run_protocol(ch, phi, StrategyConfig::deterministic_me(), rng);
  EXPECT_TRUE(r.conclusive);
  EXPECT_EQ(r.stage_reached, 0);
  EXPECT_FALSE(r.fallback_used);
  EXPECT_EQ(r.classical_bits_used, 4);
  EXPECT_EQ(r.ancillas_used, 0);
  ASSERT_TRUE(r.bob_state.has_value());
  EXPECT_NEAR(*r.run_fidelity, fidelity(phi, *r.bob_state), 1e-15);
}

TEST(teleport, bob_state_matches_branch_operator) {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    SchmidtChannel ch = ref::random_channel(rng, 5);
    StrategyConfig cfg = StrategyConfig::deterministic_me();
    if (ch.rank() >= 2 && trial % 3 != 0) {
      const int m = multiplicity_profile(ch).max_stages;
      const int k = std::uniform_int_distribution<int>(1, m)(rng);
      const Fallback f = trial % 3 == 1 ? Fallback::kMe : Fallback::kGuess;
      cfg = StrategyConfig::sequential_mc(k, f);
    }
    const Teleporter tp(ch, cfg);
    const auto all = enumerate_branches(ch, cfg);
    const QuditState phi = haar_random_state(ch.dim(), rng);
    const TeleportRecord r = tp.run(phi, rng);
    ASSERT_TRUE(r.bob_state.has_value());
    const Branch& b = find_branch(all, r);
    const QuditState expect({ch.dim()}, b.op * phi.amplitudes());
    EXPECT_NEAR(fidelity(expect, *r.bob_state), 1.0, 1e-10);
    if (cfg.kind == StrategyKind::kSequentialMc) {
      EXPECT_EQ(r.ancillas_used, r.stage_reached);
      EXPECT_EQ(r.classical_bits_used, r.stage_reached + readout_message_bits(ch.dim()));
      EXPECT_EQ(r.fallback_used, !r.conclusive);
    }
  }
}

TEST(teleport, discard_leaves_bob_empty) {
  SchmidtChannel ch = make_channel_from_squares(3, {0.5, 0.3, 0.2});
  const Teleporter tp(ch, StrategyConfig::sequential_mc(1, Fallback::kDiscard));
  Rng rng(3);
  int discarded = 0;
  for (int t = 0; t < 200; ++t) {
    const TeleportRecord r = tp.run(haar_random_state(3, rng), rng);
    if (!r.conclusive) {
      ++discarded;
      EXPECT_FALSE(r.bob_state.has_value());
      EXPECT_FALSE(r.run_fidelity.has_value());
      EXPECT_EQ(r.alice_l, -1);
      EXPECT_EQ(r.classical_bits_used, 1);
    }
  }
  EXPECT_GT(discarded, 0);
}

TEST(teleport, maximally_entangled_channel_is_perfect) {
  Rng rng(4);
  for (int d = 2; d <= 5; ++d) {
    SchmidtChannel ch = make_channel(d, std::vector<double>(d, 1.0 / std::sqrt(double(d))));
    for (int t = 0; t < 20; ++t) {
      const TeleportRecord r =
          run_protocol(ch, haar_random_state(d, rng), StrategyConfig::deterministic_me(), rng);
      EXPECT_NEAR(*r.run_fidelity, 1.0, 1e-12);
    }
    EXPECT_NEAR(exact_average_fidelity(ch, StrategyConfig::deterministic_me(), Condition::overall()),
                1.0, 1e-12);
  }
}

TEST(teleport, branches_agree_with_reference_register) {
  Rng rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    SchmidtChannel ch = ref::random_channel(rng, 5);
    const int dim = ch.dim();
    {
      const auto r = ref::branches(dim, ch.coeffs(), 0, Fallback::kMe);
      const StrategyConfig cfg = StrategyConfig::deterministic_me();
      EXPECT_NEAR(exact_average_fidelity(ch, cfg, Condition::overall()),
                  ref::average_fidelity(r, is_delivered), 1e-10);
    }
    if (ch.rank() < 2) {
      continue;
    }
    const int m = multiplicity_profile(ch).max_stages;
    for (Fallback f : {Fallback::kMe, Fallback::kGuess, Fallback::kDiscard}) {
      for (int k_max = 1; k_max <= m; ++k_max) {
        const StrategyConfig cfg = StrategyConfig::sequential_mc(k_max, f);
        const auto r = ref::branches(dim, ch.coeffs(), k_max, f);
        double total = 0.0;
        for (int k = 1; k <= k_max; ++k) {
          const auto at_k = [k](const ref::RefBranch& b) { return b.stage == k; };
          EXPECT_NEAR(exact_average_fidelity(ch, cfg, Condition::conclusive_at(k)),
                      ref::average_fidelity(r, at_k), 1e-10);
          const double p = ref::probability(r, at_k);
          EXPECT_NEAR(exact_condition_probability(ch, cfg, Condition::conclusive_at(k)), p, 1e-10);
          total += p;
        }
        const auto exhausted = [](const ref::RefBranch& b) { return b.stage == -1; };
        EXPECT_NEAR(total + ref::probability(r, exhausted), 1.0, 1e-10);
        if (ref::probability(r, is_delivered) > 1e-12) {
          EXPECT_NEAR(exact_average_fidelity(ch, cfg, Condition::overall()),
                      ref::average_fidelity(r, is_delivered), 1e-10);
        }
        if (f != Fallback::kDiscard && ref::probability(r, exhausted) > 1e-9) {
          EXPECT_NEAR(exact_average_fidelity(ch, cfg, Condition::inconclusive()),
                      ref::average_fidelity(r, exhausted), 1e-10);
        }
      }
    }
  }
}

TEST(teleport, branch_probabilities_sum_to_one) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    SchmidtChannel ch = ref::random_channel(rng, 6);
    StrategyConfig cfg = StrategyConfig::deterministic_me();
    if (ch.rank() >= 2) {
      cfg = StrategyConfig::sequential_mc(multiplicity_profile(ch).max_stages, Fallback::kDiscard);
    }
    double total = 0.0;
    for (const Branch& b : enumerate_branches(ch, cfg)) {
      total += b.probability();
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(teleport, monte_carlo_is_independent_of_worker_count) {
  SchmidtChannel ch = make_channel_from_squares(4, {0.5, 0.3, 0.2});
  const StrategyConfig cfg = StrategyConfig::sequential_mc(2, Fallback::kMe);
  const AggregateStats a = monte_carlo(ch, cfg, 3000, 42, 1);
  const AggregateStats b = monte_carlo(ch, cfg, 3000, 42, 3);
  EXPECT_EQ(a.overall_mean_fidelity, b.overall_mean_fidelity);
  EXPECT_EQ(a.overall_fidelity_stderr, b.overall_fidelity_stderr);
  ASSERT_EQ(a.conclusive.size(), b.conclusive.size());
  for (std::size_t k = 0; k < a.conclusive.size(); ++k) {
    EXPECT_EQ(a.conclusive[k].count, b.conclusive[k].count);
    EXPECT_EQ(a.conclusive[k].mean_fidelity, b.conclusive[k].mean_fidelity);
  }
  EXPECT_EQ(a.inconclusive.count, b.inconclusive.count);
  const AggregateStats c = monte_carlo(ch, cfg, 3000, 43, 1);
  EXPECT_NE(a.overall_mean_fidelity, c.overall_mean_fidelity);
}

TEST(teleport, monte_carlo_tracks_exact_values) {
  SchmidtChannel ch = make_channel_from_squares(3, {0.6, 0.4});
  const StrategyConfig cfg = StrategyConfig::sequential_mc(1, Fallback::kGuess);
  const AggregateStats s = monte_carlo(ch, cfg, 20000, 7, 2);
  const double p = exact_condition_probability(ch, cfg, Condition::conclusive_at(1));
  EXPECT_NEAR(s.conclusive[0].frequency, p, 5 * std::sqrt(p * (1 - p) / s.trials));
  EXPECT_NEAR(s.conclusive[0].mean_fidelity,
              exact_average_fidelity(ch, cfg, Condition::conclusive_at(1)),
              5 * s.conclusive[0].fidelity_stderr);
  EXPECT_NEAR(s.overall_mean_fidelity, exact_average_fidelity(ch, cfg, Condition::overall()),
              5 * s.overall_fidelity_stderr);
}

TEST(teleport, rejects_bad_configuration) {
  SchmidtChannel ch = make_channel_from_squares(4, {0.5, 0.3, 0.2});
  EXPECT_THROW(Teleporter(ch, StrategyConfig::sequential_mc(0, Fallback::kMe)),
               std::invalid_argument);
  EXPECT_THROW(Teleporter(ch, StrategyConfig::sequential_mc(3, Fallback::kMe)),
               std::invalid_argument);
  EXPECT_THROW(Teleporter(make_channel(4, {1.0}), StrategyConfig::sequential_mc(1, Fallback::kMe)),
               std::invalid_argument);
  const Teleporter tp(ch, StrategyConfig::deterministic_me());
  Rng rng(1);
  EXPECT_THROW(tp.run(haar_random_state(3, rng), rng), std::invalid_argument);
  EXPECT_THROW(monte_carlo(ch, StrategyConfig::deterministic_me(), 0, 1), std::invalid_argument);
  EXPECT_THROW(exact_average_fidelity(ch, StrategyConfig::sequential_mc(1, Fallback::kMe),
                                      Condition::conclusive_at(2)),
               std::invalid_argument);
  EXPECT_THROW(exact_average_fidelity(ch, StrategyConfig::sequential_mc(1, Fallback::kDiscard),
                                      Condition::inconclusive()),
               std::invalid_argument);
}
