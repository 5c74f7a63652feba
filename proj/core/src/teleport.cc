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

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace mctele {

namespace {

// Register layout used throughout the protocol.
constexpr int kBob = 0;
constexpr int kAliceHalf = 1;
constexpr int kUnknown = 2;

// Selected branch weight below which a condition is considered impossible.
constexpr double kUnreachableWeight = 1e-14;

std::vector<McStage> plan_stages(const SchmidtChannel& channel, const StrategyConfig& config,
                                 double tie_tolerance, int& max_stages) {
  if (config.kind == StrategyKind::kDeterministicMe) {
    max_stages = channel.rank() >= 2 ? multiplicity_profile(channel, tie_tolerance).max_stages : 0;
    return {};
  }
  StagePlan plan = build_stage_plan(channel, tie_tolerance);
  max_stages = plan.max_stages;
  if (config.k_max < 1 || config.k_max > plan.max_stages) {
    throw std::invalid_argument("stage budget k_max=" + std::to_string(config.k_max) +
                                " outside 1.." + std::to_string(plan.max_stages) +
                                " for this channel");
  }
  plan.stages.resize(config.k_max);
  return std::move(plan.stages);
}

DenseOperator bob_correction(int dim, int l, int k, bool shift_only) {
  DenseOperator shift = pauli_x_power(dim, -k);
  if (shift_only) {
    return shift;
  }
  return shift * pauli_z_power(dim, l);
}

// Applies a single-qudit operator to Alice's half of a (D, D, D) register.
Eigen::VectorXcd apply_to_alice_half(const Eigen::VectorXcd& v, const DenseOperator& op, int dim) {
  Eigen::VectorXcd out(v.size());
  Eigen::VectorXcd column(dim);
  for (int b = 0; b < dim; ++b) {
    for (int u = 0; u < dim; ++u) {
      for (int m = 0; m < dim; ++m) {
        column[m] = v[(b * dim + m) * dim + u];
      }
      Eigen::VectorXcd mapped = op * column;
      for (int m = 0; m < dim; ++m) {
        out[(b * dim + m) * dim + u] = mapped[m];
      }
    }
  }
  return out;
}

struct TrialOutcome {
  int stage = 0;
  bool conclusive = false;
  bool has_fidelity = false;
  double fidelity = 0.0;
};

// Running mean and variance, accumulated in a fixed order.
struct Welford {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double stderr_of_mean() const {
    if (n < 2) {
      return 0.0;
    }
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

struct Bucket {
  std::int64_t count = 0;
  Welford fid;

  BucketStats finish(std::int64_t trials) const {
    BucketStats s;
    s.count = count;
    s.frequency = trials > 0 ? static_cast<double>(count) / static_cast<double>(trials) : 0.0;
    s.fidelity_samples = fid.n;
    s.mean_fidelity = fid.mean;
    s.fidelity_stderr = fid.stderr_of_mean();
    return s;
  }
};

}  // namespace

std::string to_string(StrategyKind kind) {
  return kind == StrategyKind::kDeterministicMe ? "deterministic-me" : "smc";
}

std::string to_string(Fallback fallback) {
  switch (fallback) {
    case Fallback::kDiscard:
      return "discard";
    case Fallback::kMe:
      return "me";
    case Fallback::kGuess:
      return "guess";
  }
  return "?";
}

Fallback parse_fallback(const std::string& text) {
  if (text == "discard") return Fallback::kDiscard;
  if (text == "me") return Fallback::kMe;
  if (text == "guess") return Fallback::kGuess;
  throw std::invalid_argument("unknown fallback '" + text + "' (expected discard, me or guess)");
}

int readout_message_bits(int dim) {
  int bits = 0;
  while ((1 << bits) < dim) {
    ++bits;
  }
  return 2 * bits;
}

Teleporter::Teleporter(SchmidtChannel channel, StrategyConfig config, double tie_tolerance)
    : channel_(std::move(channel)),
      config_(config),
      resource_(channel_state(channel_)),
      inverse_fourier_(fourier(channel_.dim()).adjoint()) {
  stages_ = plan_stages(channel_, config_, tie_tolerance, max_stages_);
}

void Teleporter::finish_readout(QuditState state, bool shift_only, Rng& rng,
                                TeleportRecord& record) const {
  const int dim = channel_.dim();
  state = apply_local(state, inverse_fourier_, kAliceHalf);
  MeasurementResult half = measure_computational(state, kAliceHalf, rng);
  MeasurementResult unknown = measure_computational(half.collapsed, kUnknown, rng);
  record.alice_l = half.outcome;
  record.alice_k = unknown.outcome;
  record.classical_bits_used += readout_message_bits(dim);

  const std::array<int, 3> outcomes{0, half.outcome, unknown.outcome};
  QuditState bob = slice_subsystem(unknown.collapsed, kBob, outcomes);
  bob = apply_local(bob, bob_correction(dim, half.outcome, unknown.outcome, shift_only), 0);
  record.run_fidelity = fidelity(record.input_state, bob);
  record.bob_state = std::move(bob);
}

TeleportRecord Teleporter::run(const QuditState& input, Rng& rng) const {
  if (input.num_subsystems() != 1 || input.dim(0) != channel_.dim()) {
    throw std::invalid_argument("Teleporter::run: input must be a single qudit of dimension " +
                                std::to_string(channel_.dim()));
  }
  TeleportRecord record{input, 0, false, false, -1, -1, 0, 0, std::nullopt, std::nullopt};
  QuditState state = apply_gxor(tensor(resource_, input), kAliceHalf, kUnknown);

  if (config_.kind == StrategyKind::kDeterministicMe) {
    record.conclusive = true;
    finish_readout(std::move(state), false, rng, record);
    return record;
  }

  for (const McStage& stage : stages_) {
    KrausResult r =
        apply_two_outcome_kraus(state, kAliceHalf, stage.success_op, stage.failure_op, rng);
    ++record.ancillas_used;
    ++record.classical_bits_used;
    record.stage_reached = stage.stage_index;
    state = std::move(r.collapsed);
    if (r.branch == KrausBranch::kSuccess) {
      record.conclusive = true;
      finish_readout(std::move(state), false, rng, record);
      return record;
    }
  }

  if (config_.fallback == Fallback::kDiscard) {
    return record;
  }
  record.fallback_used = true;
  finish_readout(std::move(state), config_.fallback == Fallback::kGuess, rng, record);
  return record;
}

TeleportRecord run_protocol(const SchmidtChannel& channel, const QuditState& input,
                            const StrategyConfig& config, Rng& rng) {
  return Teleporter(channel, config).run(input, rng);
}

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

AggregateStats monte_carlo(const SchmidtChannel& channel, const StrategyConfig& config,
                           std::int64_t trials, std::uint64_t seed, int workers,
                           double tie_tolerance) {
  if (trials < 1) {
    throw std::invalid_argument("monte_carlo: need at least one trial");
  }
  const Teleporter teleporter(channel, config, tie_tolerance);
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));

  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t t = begin; t < end; ++t) {
      Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      QuditState input = haar_random_state(channel.dim(), rng);
      TeleportRecord rec = teleporter.run(input, rng);
      TrialOutcome& o = outcomes[static_cast<std::size_t>(t)];
      o.stage = rec.stage_reached;
      o.conclusive = rec.conclusive;
      o.has_fidelity = rec.run_fidelity.has_value();
      o.fidelity = rec.run_fidelity.value_or(0.0);
    }
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      const std::int64_t chunk = (trials + workers - 1) / workers;
      for (int w = 0; w < workers; ++w) {
        const std::int64_t begin = std::min<std::int64_t>(trials, w * chunk);
        const std::int64_t end = std::min<std::int64_t>(trials, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
          try {
            run_range(begin, end);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Bucket deterministic;
  Bucket inconclusive;
  std::vector<Bucket> conclusive(teleporter.stages().size());
  Welford overall;
  std::int64_t successes = 0;
  for (const TrialOutcome& o : outcomes) {
    Bucket* bucket = nullptr;
    if (config.kind == StrategyKind::kDeterministicMe) {
      bucket = &deterministic;
    } else if (o.conclusive) {
      bucket = &conclusive[o.stage - 1];
      ++successes;
    } else {
      bucket = &inconclusive;
    }
    ++bucket->count;
    if (o.has_fidelity) {
      bucket->fid.add(o.fidelity);
      overall.add(o.fidelity);
    }
  }

  AggregateStats stats;
  stats.trials = trials;
  stats.seed = seed;
  stats.deterministic = deterministic.finish(trials);
  for (const Bucket& b : conclusive) {
    stats.conclusive.push_back(b.finish(trials));
  }
  stats.inconclusive = inconclusive.finish(trials);
  stats.p_smc = config.kind == StrategyKind::kDeterministicMe
                    ? 1.0
                    : static_cast<double>(successes) / static_cast<double>(trials);
  stats.overall_mean_fidelity = overall.mean;
  stats.overall_fidelity_stderr = overall.stderr_of_mean();
  stats.overall_fidelity_samples = overall.n;
  return stats;
}

double Branch::probability() const {
  return (op.adjoint() * op).trace().real() / static_cast<double>(op.rows());
}

std::vector<Branch> enumerate_branches(const SchmidtChannel& channel, const StrategyConfig& config,
                                       double tie_tolerance) {
  const int dim = channel.dim();
  int max_stages = 0;
  const std::vector<McStage> stages = plan_stages(channel, config, tie_tolerance, max_stages);
  const QuditState resource = channel_state(channel);
  const DenseOperator inverse_fourier = fourier(dim).adjoint();

  // Register after GXOR for each computational-basis input; the protocol is
  // linear in the unknown state, so these columns determine every branch.
  std::vector<Eigen::VectorXcd> columns;
  for (int j = 0; j < dim; ++j) {
    columns.push_back(
        apply_gxor(tensor(resource, QuditState::basis({dim}, j)), kAliceHalf, kUnknown)
            .amplitudes());
  }

  struct Path {
    std::vector<const DenseOperator*> ops;
    int stage;
    bool conclusive;
    bool fallback;
    bool discarded;
    bool shift_only;
  };
  std::vector<Path> paths;
  if (config.kind == StrategyKind::kDeterministicMe) {
    paths.push_back({{}, 0, true, false, false, false});
  } else {
    std::vector<const DenseOperator*> failures;
    for (const McStage& stage : stages) {
      Path p{failures, stage.stage_index, true, false, false, false};
      p.ops.push_back(&stage.success_op);
      paths.push_back(std::move(p));
      failures.push_back(&stage.failure_op);
    }
    if (!stages.back().terminal) {
      const bool discard = config.fallback == Fallback::kDiscard;
      paths.push_back({failures, stages.back().stage_index, false, !discard, discard,
                       config.fallback == Fallback::kGuess});
    }
  }

  std::vector<Branch> branches;
  for (const Path& path : paths) {
    std::vector<Eigen::VectorXcd> mapped;
    for (const Eigen::VectorXcd& col : columns) {
      Eigen::VectorXcd v = col;
      for (const DenseOperator* op : path.ops) {
        v = apply_to_alice_half(v, *op, dim);
      }
      mapped.push_back(apply_to_alice_half(v, inverse_fourier, dim));
    }
    for (int l = 0; l < dim; ++l) {
      for (int k = 0; k < dim; ++k) {
        DenseOperator readout(dim, dim);
        for (int j = 0; j < dim; ++j) {
          for (int m = 0; m < dim; ++m) {
            readout(m, j) = mapped[j][(m * dim + l) * dim + k];
          }
        }
        Branch b;
        b.stage = path.stage;
        b.conclusive = path.conclusive;
        b.fallback = path.fallback;
        b.discarded = path.discarded;
        b.alice_l = l;
        b.alice_k = k;
        b.op = path.discarded ? readout : bob_correction(dim, l, k, path.shift_only) * readout;
        branches.push_back(std::move(b));
      }
    }
  }
  return branches;
}

namespace {

std::vector<Branch> select_branches(const SchmidtChannel& channel, const StrategyConfig& config,
                                    const Condition& condition, double tie_tolerance) {
  if (condition.kind == ConditionKind::kConclusiveAtStage) {
    if (config.kind != StrategyKind::kSequentialMc || condition.stage < 1 ||
        condition.stage > config.k_max) {
      throw std::invalid_argument("condition: stage " + std::to_string(condition.stage) +
                                  " is not part of the strategy");
    }
  }
  if (condition.kind == ConditionKind::kInconclusive &&
      (config.kind != StrategyKind::kSequentialMc || config.fallback == Fallback::kDiscard)) {
    throw std::invalid_argument("condition: no fallback branch delivers a state");
  }
  std::vector<Branch> selected;
  for (Branch& b : enumerate_branches(channel, config, tie_tolerance)) {
    if (b.discarded) {
      continue;
    }
    bool keep = false;
    switch (condition.kind) {
      case ConditionKind::kConclusiveAtStage:
        keep = b.conclusive && b.stage == condition.stage;
        break;
      case ConditionKind::kOverall:
        keep = true;
        break;
      case ConditionKind::kInconclusive:
        keep = b.fallback;
        break;
    }
    if (keep) {
      selected.push_back(std::move(b));
    }
  }
  return selected;
}

}  // namespace

double exact_average_fidelity(const SchmidtChannel& channel, const StrategyConfig& config,
                              const Condition& condition, double tie_tolerance) {
  const int dim = channel.dim();
  double entangled_overlap = 0.0;
  double weight = 0.0;
  for (const Branch& b : select_branches(channel, config, condition, tie_tolerance)) {
    entangled_overlap += std::norm(b.op.trace());
    weight += (b.op.adjoint() * b.op).trace().real();
  }
  if (weight < kUnreachableWeight) {
    throw std::invalid_argument("condition is unreachable for this channel");
  }
  const double singlet_fraction = entangled_overlap / (dim * weight);
  return (dim * singlet_fraction + 1.0) / (dim + 1.0);
}

double exact_condition_probability(const SchmidtChannel& channel, const StrategyConfig& config,
                                   const Condition& condition, double tie_tolerance) {
  double p = 0.0;
  for (const Branch& b : select_branches(channel, config, condition, tie_tolerance)) {
    p += b.probability();
  }
  return p;
}

}  // namespace mctele
