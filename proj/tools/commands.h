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

#ifndef MCTELE_TOOLS_COMMANDS_H
#define MCTELE_TOOLS_COMMANDS_H

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mctele/analytics.h"
#include "mctele/channel.h"

namespace mctele::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;

/// Bad input from the user; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelOptions {
  int dim = 0;
  std::string coeffs;
  bool squared = false;
  double tie_tolerance = kDefaultTieTolerance;
};

/// Builds the channel, reporting the offending --coeffs field on error.
SchmidtChannel parse_channel(const ChannelOptions& options);

/// Splits a comma-separated list of numbers. `flag` names the source in
/// error messages.
std::vector<double> parse_number_list(const std::string& text, const std::string& flag);

struct ReportOptions {
  ChannelOptions channel;
  std::string out;
};

struct PlanOptions {
  ChannelOptions channel;
  std::string out;
};

struct VerifyOptions {
  ChannelOptions channel;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  /// -1 selects every stage the channel allows; 0 checks only the
  /// deterministic protocol.
  int k_max = -1;
  std::string fallback = "me";
  int workers = 1;
  std::string out;
  /// Self-test: shift every analytic value so the verdict must fail.
  bool corrupt_analytic = false;
};

struct SweepOptions {
  int dim = 4;
  int rank = 3;
  int grid = 101;
  std::string quantities;
  double tie_tolerance = kDefaultTieTolerance;
  int workers = 1;
  std::string out;
};

/// Sweep columns in their default order.
const std::vector<std::string>& sweep_quantity_names();

int cmd_report(const ReportOptions& options, std::ostream& out);
int cmd_plan(const PlanOptions& options, std::ostream& out);
int cmd_verify(const VerifyOptions& options, std::ostream& out);
int cmd_sweep(const SweepOptions& options, std::ostream& out);

/// Shared metadata lines for CSV output.
std::string version_string();

}  // namespace mctele::cli

#endif  // MCTELE_TOOLS_COMMANDS_H
