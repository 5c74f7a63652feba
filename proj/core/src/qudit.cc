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

#include "mctele/qudit.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mctele {

namespace {

// Norms below this are treated as the zero vector.
constexpr double kDegenerateNorm = 1e-150;

std::int64_t product(const std::vector<int>& dims) {
  std::int64_t n = 1;
  for (int d : dims) {
    n *= d;
  }
  return n;
}

Complex root_of_unity(std::int64_t numerator, int dim) {
  // Reduce first so large powers keep full phase precision.
  std::int64_t r = numerator % dim;
  if (r < 0) {
    r += dim;
  }
  double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / dim;
  return {std::cos(angle), std::sin(angle)};
}

void check_subsystem(const QuditState& state, int subsystem, const char* who) {
  if (subsystem < 0 || subsystem >= state.num_subsystems()) {
    throw std::invalid_argument(std::string(who) + ": subsystem " + std::to_string(subsystem) +
                                " out of range for a " + std::to_string(state.num_subsystems()) +
                                "-qudit register");
  }
}

// Applies op to one subsystem without renormalizing.
Eigen::VectorXcd apply_local_raw(const QuditState& state, const DenseOperator& op, int subsystem) {
  const int d = state.dim(subsystem);
  const std::int64_t stride = state.stride(subsystem);
  const std::int64_t block = stride * d;
  const Eigen::VectorXcd& in = state.amplitudes();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
  for (std::int64_t base = 0; base < in.size(); base += block) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t offset = base + inner;
      for (int row = 0; row < d; ++row) {
        Complex acc = 0.0;
        for (int col = 0; col < d; ++col) {
          acc += op(row, col) * in[offset + col * stride];
        }
        out[offset + row * stride] = acc;
      }
    }
  }
  return out;
}

}  // namespace

QuditState::QuditState(std::vector<int> dims, Eigen::VectorXcd amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  if (dims_.empty()) {
    throw std::invalid_argument("QuditState: empty dimension list");
  }
  for (int d : dims_) {
    if (d < 1) {
      throw std::invalid_argument("QuditState: dimension " + std::to_string(d) + " is not positive");
    }
  }
  if (amplitudes_.size() != product(dims_)) {
    throw std::invalid_argument("QuditState: " + std::to_string(amplitudes_.size()) +
                                " amplitudes for a register of size " +
                                std::to_string(product(dims_)));
  }
  double n = amplitudes_.norm();
  if (!(n > kDegenerateNorm)) {
    throw std::invalid_argument("QuditState: zero vector cannot be normalized");
  }
  amplitudes_ /= n;
}

QuditState QuditState::basis(std::vector<int> dims, std::int64_t index) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(product(dims));
  if (index < 0 || index >= amps.size()) {
    throw std::invalid_argument("QuditState::basis: index out of range");
  }
  amps[index] = 1.0;
  return QuditState(std::move(dims), std::move(amps));
}

std::int64_t QuditState::stride(int subsystem) const {
  std::int64_t s = 1;
  for (std::size_t k = static_cast<std::size_t>(subsystem) + 1; k < dims_.size(); ++k) {
    s *= dims_[k];
  }
  return s;
}

QuditState make_state(std::vector<int> dims, std::span<const Complex> amplitudes) {
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(amplitudes.size()));
  std::copy(amplitudes.begin(), amplitudes.end(), amps.data());
  return QuditState(std::move(dims), std::move(amps));
}

QuditState tensor(const QuditState& a, const QuditState& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Eigen::VectorXcd amps(a.size() * b.size());
  for (std::int64_t i = 0; i < a.size(); ++i) {
    amps.segment(i * b.size(), b.size()) = a.amplitude(i) * b.amplitudes();
  }
  return QuditState(std::move(dims), std::move(amps));
}

DenseOperator pauli_z_power(int dim, int power) {
  if (dim < 2) {
    throw std::invalid_argument("pauli_z_power: dimension must be at least 2");
  }
  DenseOperator z = DenseOperator::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    z(m, m) = root_of_unity(static_cast<std::int64_t>(m) * power, dim);
  }
  return z;
}

DenseOperator pauli_x_power(int dim, int power) {
  if (dim < 2) {
    throw std::invalid_argument("pauli_x_power: dimension must be at least 2");
  }
  int shift = ((power % dim) + dim) % dim;
  DenseOperator x = DenseOperator::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    x((m + shift) % dim, m) = 1.0;
  }
  return x;
}

DenseOperator fourier(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("fourier: dimension must be at least 2");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  DenseOperator f(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      f(m, n) = scale * root_of_unity(static_cast<std::int64_t>(m) * n, dim);
    }
  }
  return f;
}

bool is_unitary(const DenseOperator& op, double tol) {
  if (op.rows() != op.cols()) {
    return false;
  }
  DenseOperator residual = op.adjoint() * op - DenseOperator::Identity(op.rows(), op.cols());
  return residual.cwiseAbs().maxCoeff() <= tol;
}

QuditState apply_gxor(const QuditState& state, int control, int target) {
  check_subsystem(state, control, "apply_gxor");
  check_subsystem(state, target, "apply_gxor");
  if (control == target) {
    throw std::invalid_argument("apply_gxor: control and target must differ");
  }
  const int d = state.dim(control);
  if (state.dim(target) != d) {
    throw std::invalid_argument("apply_gxor: control dimension " + std::to_string(d) +
                                " differs from target dimension " +
                                std::to_string(state.dim(target)));
  }
  const std::int64_t cs = state.stride(control);
  const std::int64_t ts = state.stride(target);
  const Eigen::VectorXcd& in = state.amplitudes();
  Eigen::VectorXcd out(in.size());
  for (std::int64_t idx = 0; idx < in.size(); ++idx) {
    const int i = static_cast<int>((idx / cs) % d);
    const int j = static_cast<int>((idx / ts) % d);
    const int mapped = ((i - j) % d + d) % d;
    out[idx + (mapped - j) * ts] = in[idx];
  }
  return QuditState(state.dims(), std::move(out));
}

QuditState apply_local(const QuditState& state, const DenseOperator& op, int subsystem) {
  check_subsystem(state, subsystem, "apply_local");
  if (op.rows() != state.dim(subsystem) || op.cols() != state.dim(subsystem)) {
    throw std::invalid_argument("apply_local: operator of size " + std::to_string(op.rows()) +
                                " on subsystem of dimension " +
                                std::to_string(state.dim(subsystem)));
  }
  return QuditState(state.dims(), apply_local_raw(state, op, subsystem));
}

std::vector<double> outcome_probabilities(const QuditState& state, int subsystem) {
  check_subsystem(state, subsystem, "outcome_probabilities");
  const int d = state.dim(subsystem);
  const std::int64_t stride = state.stride(subsystem);
  std::vector<double> probs(d, 0.0);
  for (std::int64_t idx = 0; idx < state.size(); ++idx) {
    probs[(idx / stride) % d] += std::norm(state.amplitude(idx));
  }
  return probs;
}

MeasurementResult measure_computational(const QuditState& state, int subsystem, Rng& rng) {
  std::vector<double> probs = outcome_probabilities(state, subsystem);
  double total = 0.0;
  for (double p : probs) {
    total += p;
  }
  if (!(total > kDegenerateNorm)) {
    throw std::runtime_error("measure_computational: degenerate state");
  }
  std::uniform_real_distribution<double> uniform(0.0, total);
  const double u = uniform(rng);
  int outcome = 0;
  double cumulative = 0.0;
  const int d = static_cast<int>(probs.size());
  for (; outcome < d - 1; ++outcome) {
    cumulative += probs[outcome];
    if (u < cumulative && probs[outcome] > 0.0) {
      break;
    }
  }
  // Never land on a zero-probability tail outcome through rounding.
  while (probs[outcome] <= 0.0 && outcome > 0) {
    --outcome;
  }

  const std::int64_t stride = state.stride(subsystem);
  Eigen::VectorXcd amps = state.amplitudes();
  for (std::int64_t idx = 0; idx < amps.size(); ++idx) {
    if ((idx / stride) % d != outcome) {
      amps[idx] = 0.0;
    }
  }
  return {outcome, QuditState(state.dims(), std::move(amps)), probs[outcome] / total};
}

KrausResult apply_two_outcome_kraus(const QuditState& state, int subsystem,
                                    const DenseOperator& success_op,
                                    const DenseOperator& failure_op, Rng& rng) {
  check_subsystem(state, subsystem, "apply_two_outcome_kraus");
  const int d = state.dim(subsystem);
  if (success_op.rows() != d || success_op.cols() != d || failure_op.rows() != d ||
      failure_op.cols() != d) {
    throw std::invalid_argument("apply_two_outcome_kraus: operator dimension mismatch");
  }
  DenseOperator completeness = success_op.adjoint() * success_op +
                               failure_op.adjoint() * failure_op - DenseOperator::Identity(d, d);
  if (completeness.cwiseAbs().maxCoeff() > kPipelineTolerance) {
    throw std::invalid_argument("apply_two_outcome_kraus: completeness violated by " +
                                std::to_string(completeness.cwiseAbs().maxCoeff()));
  }

  Eigen::VectorXcd success = apply_local_raw(state, success_op, subsystem);
  Eigen::VectorXcd failure = apply_local_raw(state, failure_op, subsystem);
  const double p_success = success.squaredNorm();
  const double p_failure = failure.squaredNorm();
  const double total = p_success + p_failure;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  if (p_failure <= 0.0 || (p_success > 0.0 && u * total < p_success)) {
    return {KrausBranch::kSuccess, QuditState(state.dims(), std::move(success)), p_success / total};
  }
  return {KrausBranch::kFailure, QuditState(state.dims(), std::move(failure)), p_failure / total};
}

QuditState haar_random_state(int dim, Rng& rng) {
  if (dim < 1) {
    throw std::invalid_argument("haar_random_state: dimension must be positive");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd amps(dim);
  for (int k = 0; k < dim; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    amps[k] = Complex(re, im);
  }
  return QuditState({dim}, std::move(amps));
}

double fidelity(const QuditState& a, const QuditState& b) {
  if (a.dims() != b.dims()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  double f = std::norm(a.amplitudes().dot(b.amplitudes()));
  return std::clamp(f, 0.0, 1.0);
}

QuditState slice_subsystem(const QuditState& state, int keep, std::span<const int> outcomes) {
  check_subsystem(state, keep, "slice_subsystem");
  if (static_cast<int>(outcomes.size()) != state.num_subsystems()) {
    throw std::invalid_argument("slice_subsystem: need one outcome per subsystem");
  }
  std::int64_t base = 0;
  for (int s = 0; s < state.num_subsystems(); ++s) {
    if (s == keep) {
      continue;
    }
    if (outcomes[s] < 0 || outcomes[s] >= state.dim(s)) {
      throw std::invalid_argument("slice_subsystem: outcome out of range");
    }
    base += outcomes[s] * state.stride(s);
  }
  const int d = state.dim(keep);
  const std::int64_t stride = state.stride(keep);
  Eigen::VectorXcd amps(d);
  for (int m = 0; m < d; ++m) {
    amps[m] = state.amplitude(base + m * stride);
  }
  if (!(amps.norm() > kDegenerateNorm)) {
    throw std::runtime_error("slice_subsystem: selected slice is empty");
  }
  return QuditState({d}, std::move(amps));
}

}  // namespace mctele
