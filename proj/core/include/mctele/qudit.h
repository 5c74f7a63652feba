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

#ifndef MCTELE_QUDIT_H
#define MCTELE_QUDIT_H

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mctele {

using Complex = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;

/// Random stream injected into every stochastic operation.
using Rng = std::mt19937_64;

/// Tolerance for exact algebraic identities (unitarity, gate algebra).
inline constexpr double kExactTolerance = 1e-12;
/// Tolerance for composed numerical pipelines (Kraus completeness, branch sums).
inline constexpr double kPipelineTolerance = 1e-10;

/// Dense pure state of a register of one or more qudits.
///
/// Amplitudes are flattened row-major with subsystem 0 most significant, so
/// for dims (d0, d1, d2) the basis state |i0 i1 i2> lives at index
/// (i0 * d1 + i1) * d2 + i2. The protocol registers use the fixed layout
/// subsystem 0 = Bob, 1 = Alice's channel half, 2 = the unknown state.
class QuditState {
 public:
  /// Validates lengths and normalizes. Throws std::invalid_argument on a
  /// length mismatch, an empty or non-positive dimension, or a zero vector.
  QuditState(std::vector<int> dims, Eigen::VectorXcd amplitudes);

  /// Computational basis state |index> of a register with the given dims.
  static QuditState basis(std::vector<int> dims, std::int64_t index);

  const std::vector<int>& dims() const { return dims_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::int64_t index) const { return amplitudes_[index]; }
  std::int64_t size() const { return amplitudes_.size(); }
  int num_subsystems() const { return static_cast<int>(dims_.size()); }
  int dim(int subsystem) const { return dims_.at(subsystem); }
  double norm() const { return amplitudes_.norm(); }

  /// Distance in the flat index between neighbouring levels of a subsystem.
  std::int64_t stride(int subsystem) const;

 private:
  std::vector<int> dims_;
  Eigen::VectorXcd amplitudes_;
};

/// Normalized state from raw amplitudes; see QuditState's constructor.
QuditState make_state(std::vector<int> dims, std::span<const Complex> amplitudes);

/// Product state a (x) b, with a's subsystems first.
QuditState tensor(const QuditState& a, const QuditState& b);

/// Generalized phase operator Z^p: |m> -> e^{2 pi i m p / D} |m>.
DenseOperator pauli_z_power(int dim, int power);

/// Generalized shift X^p: |m> -> |m + p mod D>. Negative powers wrap.
DenseOperator pauli_x_power(int dim, int power);

/// Discrete Fourier transform with entries e^{2 pi i m n / D} / sqrt(D).
DenseOperator fourier(int dim);

/// True when op^dagger op equals the identity entrywise within tol.
bool is_unitary(const DenseOperator& op, double tol = kExactTolerance);

/// Generalized XOR |i>_c |j>_t -> |i>_c |i - j mod D>_t.
QuditState apply_gxor(const QuditState& state, int control, int target);

/// (I (x) ... (x) op (x) ... (x) I) |state>, renormalized.
QuditState apply_local(const QuditState& state, const DenseOperator& op, int subsystem);

struct MeasurementResult {
  int outcome;
  QuditState collapsed;
  double probability;
};

/// Born-rule probabilities for a computational-basis readout of one subsystem.
std::vector<double> outcome_probabilities(const QuditState& state, int subsystem);

/// Samples a computational-basis outcome on one subsystem and collapses.
MeasurementResult measure_computational(const QuditState& state, int subsystem, Rng& rng);

enum class KrausBranch { kSuccess, kFailure };

struct KrausResult {
  KrausBranch branch;
  QuditState collapsed;
  double probability;
};

/// Samples the two-outcome instrument {success_op, failure_op} on one subsystem.
///
/// This is the ancilla coupling followed by an ancilla readout, with the
/// ancilla traced out: the success branch corresponds to ancilla |0> and the
/// failure branch to ancilla |1>. Requires success^dag success + failure^dag
/// failure = I within kPipelineTolerance.
KrausResult apply_two_outcome_kraus(const QuditState& state, int subsystem,
                                    const DenseOperator& success_op,
                                    const DenseOperator& failure_op, Rng& rng);

/// Haar-uniform single-qudit pure state (normalized complex Gaussian vector).
QuditState haar_random_state(int dim, Rng& rng);

/// |<a|b>|^2, clamped to [0, 1].
double fidelity(const QuditState& a, const QuditState& b);

/// State of one subsystem given that every other subsystem sits in the basis
/// state listed in `outcomes` (the entry for `keep` is ignored). Throws
/// std::runtime_error if that slice of the register is empty.
QuditState slice_subsystem(const QuditState& state, int keep, std::span<const int> outcomes);

}  // namespace mctele

#endif  // MCTELE_QUDIT_H
