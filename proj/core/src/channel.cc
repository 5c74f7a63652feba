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

#include "mctele/channel.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace mctele {

SchmidtChannel make_channel(int dim, std::vector<double> coeffs) {
  if (dim < 2) {
    throw std::invalid_argument("make_channel: dimension must be at least 2");
  }
  if (coeffs.empty()) {
    throw std::invalid_argument("make_channel: no Schmidt coefficients given");
  }
  if (static_cast<int>(coeffs.size()) > dim) {
    throw std::invalid_argument("make_channel: " + std::to_string(coeffs.size()) +
                                " coefficients exceed dimension " + std::to_string(dim));
  }
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!(coeffs[i] > 0.0) || !std::isfinite(coeffs[i])) {
      throw std::invalid_argument("make_channel: coefficient " + std::to_string(i) + " (" +
                                  std::to_string(coeffs[i]) + ") is not strictly positive");
    }
    norm_sq += coeffs[i] * coeffs[i];
  }
  if (std::abs(norm_sq - 1.0) >= kRenormalizationSlack) {
    throw std::invalid_argument("make_channel: squared coefficients sum to " +
                                std::to_string(norm_sq) + ", expected 1");
  }
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (double& c : coeffs) {
    c *= scale;
  }
  std::sort(coeffs.begin(), coeffs.end(), std::greater<>());
  return SchmidtChannel(dim, std::move(coeffs));
}

SchmidtChannel make_channel_from_squares(int dim, const std::vector<double>& squares) {
  std::vector<double> coeffs;
  coeffs.reserve(squares.size());
  for (std::size_t i = 0; i < squares.size(); ++i) {
    if (!(squares[i] > 0.0)) {
      throw std::invalid_argument("make_channel: squared coefficient " + std::to_string(i) +
                                  " (" + std::to_string(squares[i]) +
                                  ") is not strictly positive");
    }
    coeffs.push_back(std::sqrt(squares[i]));
  }
  return make_channel(dim, std::move(coeffs));
}

QuditState channel_state(const SchmidtChannel& channel) {
  const int d = channel.dim();
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  for (int m = 0; m < channel.rank(); ++m) {
    amps[m * d + m] = channel.coeffs()[m];
  }
  return QuditState({d, d}, std::move(amps));
}

int MultiplicityProfile::rank() const {
  int n = 0;
  for (const auto& g : groups) {
    n += g.multiplicity;
  }
  return n;
}

int MultiplicityProfile::tail_multiplicity(int j) const {
  int n = 0;
  for (int i = j; i <= d; ++i) {
    n += multiplicity(i);
  }
  return n;
}

MultiplicityProfile multiplicity_profile(std::span<const double> coeffs, double tie_tolerance) {
  std::vector<double> sorted(coeffs.begin(), coeffs.end());
  std::sort(sorted.begin(), sorted.end());

  MultiplicityProfile profile;
  std::size_t start = 0;
  while (start < sorted.size()) {
    std::size_t end = start + 1;
    while (end < sorted.size() && sorted[end] - sorted[start] <= tie_tolerance) {
      ++end;
    }
    double sum = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      sum += sorted[i];
    }
    const int mu = static_cast<int>(end - start);
    profile.groups.push_back({sum / mu, mu});
    start = end;
  }
  profile.d = static_cast<int>(profile.groups.size());
  if (profile.d > 0) {
    // A unique largest coefficient leaves identical failure states after
    // the second-to-last group is filtered out.
    profile.max_stages = profile.groups.back().multiplicity == 1 ? profile.d - 1 : profile.d;
  }
  return profile;
}

MultiplicityProfile multiplicity_profile(const SchmidtChannel& channel, double tie_tolerance) {
  return multiplicity_profile(channel.coeffs(), tie_tolerance);
}

std::vector<double> grouped_coefficients(const MultiplicityProfile& profile) {
  std::vector<double> out;
  for (auto it = profile.groups.rbegin(); it != profile.groups.rend(); ++it) {
    out.insert(out.end(), it->multiplicity, it->value);
  }
  return out;
}

std::vector<QuditState> symmetric_family(std::span<const double> coeffs, int dim) {
  if (coeffs.empty() || static_cast<int>(coeffs.size()) > dim) {
    throw std::invalid_argument("symmetric_family: need between 1 and dim coefficients");
  }
  Eigen::VectorXcd seed = Eigen::VectorXcd::Zero(dim);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    seed[static_cast<Eigen::Index>(k)] = coeffs[k];
  }
  std::vector<QuditState> family;
  family.reserve(dim);
  for (int l = 0; l < dim; ++l) {
    family.emplace_back(std::vector<int>{dim}, pauli_z_power(dim, l) * seed);
  }
  return family;
}

}  // namespace mctele
