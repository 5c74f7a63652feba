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

#include "commands.h"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mctele/teleport.h"
#include "output.h"

namespace mctele::cli {

std::string version_string() { return std::string("mctele ") + MCTELE_VERSION; }

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  int index = 0;
  while (std::getline(ss, field, ',')) {
    ++index;
    const auto b = field.find_first_not_of(" \t");
    const auto e = field.find_last_not_of(" \t");
    field = b == std::string::npos ? "" : field.substr(b, e - b + 1);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
      throw UsageError(flag + ": field " + std::to_string(index) + " ('" + field +
                       "') is not a number");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw UsageError(flag + ": no values given");
  }
  return values;
}

SchmidtChannel parse_channel(const ChannelOptions& options) {
  if (options.dim == 0) {
    throw UsageError("--D is required");
  }
  if (options.coeffs.empty()) {
    throw UsageError("--coeffs is required");
  }
  const std::vector<double> values = parse_number_list(options.coeffs, "--coeffs");
  try {
    return options.squared ? make_channel_from_squares(options.dim, values)
                           : make_channel(options.dim, values);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--coeffs: ") + e.what());
  }
}

std::string channel_echo(const ChannelOptions& options) {
  return "D=" + std::to_string(options.dim) + " coeffs=" + options.coeffs +
         " squared=" + (options.squared ? "1" : "0") +
         " tie_tol=" + format_double(options.tie_tolerance);
}

OutputFile::OutputFile(const std::string& path) : path_(path) {
  if (!path.empty()) {
    file_.open(path);
    if (!file_) {
      throw UsageError("cannot write '" + path + "'");
    }
  }
}

std::ostream& OutputFile::stream(std::ostream& fallback) {
  return path_.empty() ? fallback : file_;
}

int cmd_report(const ReportOptions& options, std::ostream& out) {
  const SchmidtChannel channel = parse_channel(options.channel);
  OutputFile csv(options.out);
  const ChannelReport r = channel_report(channel, options.channel.tie_tolerance);

  out << "channel D=" << r.dim << " N=" << r.rank << " d=" << r.d << " M=" << r.max_stages << '\n';
  out << "coefficients";
  for (double a : channel.coeffs()) {
    out << ' ' << format_double(a);
  }
  out << "\n\n";
  const auto scalar = [&out](const char* name, double v) {
    out << std::left << std::setw(18) << name << format_double(v) << '\n';
  };
  scalar("F_me", r.f_me);
  scalar("f_me", r.singlet_me);
  scalar("F_clas", r.f_clas);
  scalar("F_me_after_fail", r.f_me_after_fail);
  scalar("overall_me", r.overall_me);
  scalar("overall_smc", r.overall_smc);
  out << '\n';

  Table table({"stage", "F_mc_s", "f_mc_s", "p_fail", "p_success", "P_smc_overall", "useful"});
  for (int k = 0; k < r.stage_rows(); ++k) {
    table.add({std::to_string(k + 1), format_double(r.f_mc_s[k]), format_double(r.singlet_mc_s[k]),
               format_double(r.p_fail[k]), format_double(r.p_success[k]),
               format_double(r.p_smc_overall[k]), r.useful[k] ? "yes" : "no"});
  }
  table.print(out);

  if (!options.out.empty()) {
    write_report_csv(csv.stream(out), r,
                     {version_string(), "command=report " + channel_echo(options.channel)});
  }
  return kExitOk;
}

int cmd_plan(const PlanOptions& options, std::ostream& out) {
  const SchmidtChannel channel = parse_channel(options.channel);
  OutputFile csv(options.out);
  const double tol = options.channel.tie_tolerance;
  const ChannelReport r = channel_report(channel, tol);
  const MultiplicityProfile profile = multiplicity_profile(channel, tol);

  Table table({"stage", "support", "p_fail", "p_success", "P_cumulative", "F_conclusive",
               "confidence", "useful", "classical_bits", "ancillas"});
  for (int k = 1; k <= r.stage_rows(); ++k) {
    table.add({std::to_string(k), std::to_string(profile.tail_multiplicity(k)),
               format_double(r.p_fail[k - 1]), format_double(r.p_success[k - 1]),
               format_double(r.p_smc_overall[k - 1]), format_double(r.f_mc_s[k - 1]),
               format_double(r.singlet_mc_s[k - 1]), r.useful[k - 1] ? "1" : "0",
               std::to_string(readout_message_bits(channel.dim()) + k), std::to_string(k)});
  }
  out << "channel D=" << r.dim << " N=" << r.rank << " d=" << r.d << " M=" << r.max_stages
      << "  F_me=" << format_double(r.f_me) << '\n';
  out << "worst-case success at stage k costs 2*ceil(log2 D) + k bits and k ancillas\n\n";
  table.print(out);

  if (!options.out.empty()) {
    std::ostream& os = csv.stream(out);
    os << "# " << version_string() << '\n';
    os << "# command=plan " << channel_echo(options.channel) << '\n';
    table.write_csv(os);
  }
  return kExitOk;
}

}  // namespace mctele::cli
