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

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "commands.h"
#include "mctele/analytics.h"
#include "output.h"

namespace mctele::cli {

namespace {

// Free squared coefficients range over [kEdge, 1 - kEdge].
constexpr double kEdge = 1e-3;
// The derived last square must exceed this to count as positive.
constexpr double kPositivityFloor = 1e-12;
constexpr std::int64_t kMaxPoints = 4'000'000;

double stage_two_fidelity(const ChannelReport& r, int mu_1) {
  if (mu_1 == r.rank) {
    return std::numeric_limits<double>::quiet_NaN();  // stage 1 never fails
  }
  return (r.rank - mu_1 + 1.0) / (r.dim + 1.0);
}

double useful_probability(const ChannelReport& r) {
  double p = 0.0;
  for (int k = 0; k < r.max_stages && r.useful[k]; ++k) {
    p = r.p_smc_overall[k];
  }
  return p;
}

struct Column {
  std::string name;
  // The multiplicity of the smallest coefficient is passed alongside.
  std::function<double(const ChannelReport&, int)> eval;
};

const std::vector<Column>& columns() {
  static const std::vector<Column> kColumns = {
      {"F_mc_s1", [](const ChannelReport& r, int) { return r.f_mc_s[0]; }},
      {"F_me", [](const ChannelReport& r, int) { return r.f_me; }},
      {"F_mc_s2", stage_two_fidelity},
      {"overall_me", [](const ChannelReport& r, int) { return r.overall_me; }},
      {"overall_smc", [](const ChannelReport& r, int) { return r.overall_smc; }},
      {"P_stage1", [](const ChannelReport& r, int) { return r.p_success[0]; }},
      {"P_smc_overall", [](const ChannelReport& r, int) { return r.p_smc_overall.back(); }},
      {"P_smc_useful", [](const ChannelReport& r, int) { return useful_probability(r); }},
      {"useful_s1",
       [](const ChannelReport& r, int) { return r.max_stages >= 1 && r.useful[0] ? 1.0 : 0.0; }},
      {"useful_s2",
       [](const ChannelReport& r, int) { return r.max_stages >= 2 && r.useful[1] ? 1.0 : 0.0; }},
      {"M", [](const ChannelReport& r, int) { return static_cast<double>(r.max_stages); }},
      {"F_clas", [](const ChannelReport& r, int) { return r.f_clas; }},
      {"F_me_after_fail", [](const ChannelReport& r, int) { return r.f_me_after_fail; }},
  };
  return kColumns;
}

std::vector<const Column*> select_columns(const std::string& list) {
  std::vector<const Column*> out;
  if (list.empty()) {
    for (const Column& c : columns()) {
      out.push_back(&c);
    }
    return out;
  }
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto it = std::find_if(columns().begin(), columns().end(),
                                 [&](const Column& c) { return c.name == name; });
    if (it == columns().end()) {
      throw UsageError("--quantities: unknown quantity '" + name + "'");
    }
    out.push_back(&*it);
  }
  return out;
}

// Row text for grid point `index`, or empty when the point is infeasible.
std::string sweep_row(const SweepOptions& o, const std::vector<const Column*>& cols,
                      std::int64_t index) {
  const int free = o.rank - 1;
  const double step = (1.0 - 2.0 * kEdge) / (o.grid - 1);
  std::vector<double> squares(o.rank);
  std::int64_t rest = index;
  double sum = 0.0;
  for (int i = free - 1; i >= 0; --i) {
    squares[i] = kEdge + static_cast<double>(rest % o.grid) * step;
    rest /= o.grid;
  }
  for (int i = 0; i < free; ++i) {
    sum += squares[i];
  }
  squares[free] = 1.0 - sum;
  if (!(squares[free] > kPositivityFloor)) {
    return {};
  }
  const SchmidtChannel ch = make_channel_from_squares(o.dim, squares);
  const ChannelReport r = channel_report(ch, o.tie_tolerance);
  const int mu_1 = multiplicity_profile(ch, o.tie_tolerance).multiplicity(1);

  std::string row = std::to_string(index);
  for (double s : squares) {
    row += ',' + format_double(s);
  }
  for (const Column* c : cols) {
    row += ',' + format_double(c->eval(r, mu_1));
  }
  return row;
}

}  // namespace

const std::vector<std::string>& sweep_quantity_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const Column& c : columns()) {
      names.push_back(c.name);
    }
    return names;
  }();
  return kNames;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  if (o.rank > o.dim) {
    throw UsageError("--N " + std::to_string(o.rank) + " exceeds --D " + std::to_string(o.dim));
  }
  const std::vector<const Column*> cols = select_columns(o.quantities);
  std::int64_t total = 1;
  for (int i = 0; i < o.rank - 1; ++i) {
    total *= o.grid;
    if (total > kMaxPoints) {
      throw UsageError("grid has more than " + std::to_string(kMaxPoints) + " points");
    }
  }
  OutputFile file(o.out);

  std::vector<std::string> rows(total);
  const int workers = static_cast<int>(std::min<std::int64_t>(o.workers, total));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::int64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::int64_t end = std::min(total, (w + 1) * chunk);
          for (std::int64_t i = w * chunk; i < end; ++i) {
            rows[i] = sweep_row(o, cols, i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  const auto feasible =
      std::count_if(rows.begin(), rows.end(), [](const std::string& r) { return !r.empty(); });

  std::ostream& os = file.stream(out);
  os << "# " << version_string() << '\n';
  os << "# command=sweep D=" << o.dim << " N=" << o.rank << " grid=" << o.grid
     << " edge=" << format_double(kEdge) << " tie_tol=" << format_double(o.tie_tolerance) << '\n';
  os << "# points=" << total << " feasible=" << feasible << " skipped=" << total - feasible << '\n';
  os << "point";
  for (int i = 0; i < o.rank; ++i) {
    os << ",a" << i << "_sq";
  }
  for (const Column* c : cols) {
    os << ',' << c->name;
  }
  os << '\n';
  for (const std::string& r : rows) {
    if (!r.empty()) {
      os << r << '\n';
    }
  }
  if (!o.out.empty()) {
    out << "wrote " << feasible << " rows (" << total - feasible << " infeasible points skipped) to "
        << o.out << '\n';
  }
  return kExitOk;
}

}  // namespace mctele::cli
