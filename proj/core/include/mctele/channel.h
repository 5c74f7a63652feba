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

#ifndef MCTELE_CHANNEL_H
#define MCTELE_CHANNEL_H

#include <span>
#include <vector>

#include "mctele/qudit.h"

namespace mctele {

/// Coefficients closer than this are one multiplicity group.
inline constexpr double kDefaultTieTolerance = 1e-9;

/// Inputs whose squared norm is off by less than this are silently rescaled.
inline constexpr double kRenormalizationSlack = 1e-6;

/// Pure two-qudit entanglement resource in Schmidt form, sum_m a_m |m>|m>.
///
/// Coefficients are strictly positive, sorted non-increasing and
/// square-normalized. The Schmidt rank is the number of coefficients.
class SchmidtChannel {
 public:
  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double min_coeff() const { return coeffs_.back(); }

 private:
  friend SchmidtChannel make_channel(int dim, std::vector<double> coeffs);
  SchmidtChannel(int dim, std::vector<double> coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {}

  int dim_;
  std::vector<double> coeffs_;
};

/// Validates, sorts and (if within kRenormalizationSlack) renormalizes.
/// Throws std::invalid_argument for an empty list, more than `dim`
/// coefficients, a non-positive coefficient, or a larger normalization error.
SchmidtChannel make_channel(int dim, std::vector<double> coeffs);

/// Same as make_channel but takes squared coefficients (probabilities).
SchmidtChannel make_channel_from_squares(int dim, const std::vector<double>& squares);

/// Two-qudit state sum_m a_m |m>|m>, zero on levels m >= rank.
QuditState channel_state(const SchmidtChannel& channel);

struct MultiplicityGroup {
  double value;
  int multiplicity;
};

/// Coefficients grouped into runs of equal value, smallest value first.
///
/// `groups[j - 1]` holds the j-th smallest value and its multiplicity mu_j.
/// `max_stages` is the number of conclusive stages a sequential
/// maximum-confidence measurement can have: d - 1 when the largest value is
/// unique, d otherwise (0 for a rank-one channel).
struct MultiplicityProfile {
  std::vector<MultiplicityGroup> groups;
  int d = 0;
  int max_stages = 0;

  int rank() const;
  int multiplicity(int j) const { return groups.at(j - 1).multiplicity; }
  double value(int j) const { return groups.at(j - 1).value; }
  /// sum_{i >= j} mu_i, the support size entering stage j.
  int tail_multiplicity(int j) const;
};

/// Groups any positive coefficient list. Members of a group lie within
/// `tie_tolerance` of the group's smallest member; the group value is the
/// members' mean.
MultiplicityProfile multiplicity_profile(std::span<const double> coeffs,
                                         double tie_tolerance = kDefaultTieTolerance);

MultiplicityProfile multiplicity_profile(const SchmidtChannel& channel,
                                         double tie_tolerance = kDefaultTieTolerance);

/// Coefficients with each group collapsed onto its value, largest first.
std::vector<double> grouped_coefficients(const MultiplicityProfile& profile);

/// The D symmetric states Z^l sum_k a_k |k>, l = 0 .. D-1.
std::vector<QuditState> symmetric_family(std::span<const double> coeffs, int dim);

}  // namespace mctele

#endif  // MCTELE_CHANNEL_H
