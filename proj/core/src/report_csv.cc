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

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mctele/analytics.h"

namespace mctele {

namespace {

constexpr const char* kHeader = "quantity,stage,value";

void scalar(std::ostream& out, const char* name, double value) {
  out << name << ",," << format_double(value) << '\n';
}

template <typename T>
void staged(std::ostream& out, const char* name, const std::vector<T>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    out << name << ',' << k + 1 << ',' << format_double(static_cast<double>(values[k])) << '\n';
  }
}

[[noreturn]] void malformed(int line, const std::string& why) {
  throw std::invalid_argument("report csv line " + std::to_string(line) + ": " + why);
}

double parse_value(const std::string& text, int line) {
  if (text.empty()) {
    malformed(line, "missing value");
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    malformed(line, "value '" + text + "' is not a number");
  }
  return v;
}

int parse_int(double v, int line) {
  if (v != static_cast<int>(v)) {
    malformed(line, "expected an integer, got " + format_double(v));
  }
  return static_cast<int>(v);
}

template <typename T>
void put_staged(std::vector<T>& values, int stage, T v, int line) {
  if (stage != static_cast<int>(values.size()) + 1) {
    malformed(line, "stage " + std::to_string(stage) + " out of order");
  }
  values.push_back(v);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  return buf;
}

void write_report_csv(std::ostream& out, const ChannelReport& r,
                      const std::vector<std::string>& metadata) {
  for (const auto& m : metadata) {
    out << "# " << m << '\n';
  }
  out << kHeader << '\n';
  scalar(out, "D", r.dim);
  scalar(out, "N", r.rank);
  scalar(out, "d", r.d);
  scalar(out, "M", r.max_stages);
  scalar(out, "F_me", r.f_me);
  scalar(out, "f_me", r.singlet_me);
  scalar(out, "F_clas", r.f_clas);
  staged(out, "F_mc_s", r.f_mc_s);
  staged(out, "f_mc_s", r.singlet_mc_s);
  staged(out, "p_fail", r.p_fail);
  staged(out, "p_success", r.p_success);
  std::vector<int> useful(r.useful.begin(), r.useful.end());
  staged(out, "useful", useful);
  staged(out, "P_smc_overall", r.p_smc_overall);
  scalar(out, "F_me_after_fail", r.f_me_after_fail);
  scalar(out, "overall_me", r.overall_me);
  scalar(out, "overall_smc", r.overall_smc);
}

ChannelReport read_report_csv(std::istream& in) {
  ChannelReport r;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (!header) {
      if (line != kHeader) {
        malformed(lineno, "expected header '" + std::string(kHeader) + "'");
      }
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      malformed(lineno, "expected three comma-separated fields");
    }
    const std::string name = line.substr(0, c1);
    const std::string stage_text = line.substr(c1 + 1, c2 - c1 - 1);
    const double v = parse_value(line.substr(c2 + 1), lineno);
    const int stage = stage_text.empty() ? 0 : parse_int(parse_value(stage_text, lineno), lineno);

    if (stage == 0) {
      if (name == "D") r.dim = parse_int(v, lineno);
      else if (name == "N") r.rank = parse_int(v, lineno);
      else if (name == "d") r.d = parse_int(v, lineno);
      else if (name == "M") r.max_stages = parse_int(v, lineno);
      else if (name == "F_me") r.f_me = v;
      else if (name == "f_me") r.singlet_me = v;
      else if (name == "F_clas") r.f_clas = v;
      else if (name == "F_me_after_fail") r.f_me_after_fail = v;
      else if (name == "overall_me") r.overall_me = v;
      else if (name == "overall_smc") r.overall_smc = v;
      else malformed(lineno, "unknown scalar quantity '" + name + "'");
    } else {
      if (name == "F_mc_s") put_staged(r.f_mc_s, stage, v, lineno);
      else if (name == "f_mc_s") put_staged(r.singlet_mc_s, stage, v, lineno);
      else if (name == "p_fail") put_staged(r.p_fail, stage, v, lineno);
      else if (name == "p_success") put_staged(r.p_success, stage, v, lineno);
      else if (name == "P_smc_overall") put_staged(r.p_smc_overall, stage, v, lineno);
      else if (name == "useful") {
        if (v != 0.0 && v != 1.0) {
          malformed(lineno, "useful flag must be 0 or 1");
        }
        if (stage != static_cast<int>(r.useful.size()) + 1) {
          malformed(lineno, "stage " + std::to_string(stage) + " out of order");
        }
        r.useful.push_back(v == 1.0);
      } else {
        malformed(lineno, "unknown staged quantity '" + name + "'");
      }
    }
  }
  if (!header) {
    malformed(lineno, "no header line");
  }
  return r;
}

}  // namespace mctele
