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

#include "cli.h"

#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "commands.h"

namespace mctele::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void add_channel_options(CLI::App* sub, ChannelOptions& ch) {
  sub->add_option("--D", ch.dim, "Qudit dimension D")->check(CLI::Range(2, 64));
  sub->add_option("--coeffs", ch.coeffs,
                  "Comma-separated Schmidt coefficients (amplitudes unless --squared)");
  sub->add_flag("--squared", ch.squared, "Read --coeffs as squared coefficients");
  sub->add_option("--tie-tol", ch.tie_tolerance, "Coefficients closer than this are tied")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

void apply_config(CLI::App* sub, const std::string& path) {
  for (const ConfigEntry& entry : read_config(path)) {
    const std::string where = path + ":" + std::to_string(entry.line) + ": ";
    if (entry.key == "config") {
      throw UsageError(where + "a config file cannot include another");
    }
    CLI::Option* opt = sub->get_option_no_throw("--" + entry.key);
    if (opt == nullptr) {
      throw UsageError(where + "unknown field '" + entry.key + "' for command '" +
                       sub->get_name() + "'");
    }
    if (opt->count() > 0) {
      continue;  // the command line wins
    }
    try {
      opt->add_result(entry.value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError(where + "field '" + entry.key + "': " + e.what());
    }
  }
}

}  // namespace

std::vector<ConfigEntry> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file '" + path + "'");
  }
  std::vector<ConfigEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value, got '" +
                       body + "'");
    }
    std::string key = trim(body.substr(0, eq));
    if (key.rfind("--", 0) == 0) {
      key = key.substr(2);
    }
    if (key.empty()) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    entries.push_back({key, trim(body.substr(eq + 1)), lineno});
  }
  return entries;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qudit teleportation through channels of nonmaximal Schmidt rank", "mctele"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  std::string config_path;
  auto add_config = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "key=value file; command-line flags take precedence");
  };

  ReportOptions report;
  CLI::App* report_cmd = app.add_subcommand("report", "Closed-form fidelities and probabilities");
  add_channel_options(report_cmd, report.channel);
  report_cmd->add_option("--out", report.out, "Write the report as CSV");
  add_config(report_cmd);

  PlanOptions plan;
  CLI::App* plan_cmd = app.add_subcommand("plan", "Stage plan with resource accounting");
  add_channel_options(plan_cmd, plan.channel);
  plan_cmd->add_option("--out", plan.out, "Write the plan as CSV");
  add_config(plan_cmd);

  VerifyOptions verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Monte Carlo, exact oracle and closed forms side by side");
  add_channel_options(verify_cmd, verify.channel);
  verify_cmd->add_option("--trials", verify.trials, "Monte Carlo trials per strategy")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Base seed")->capture_default_str();
  verify_cmd->add_option("--k-max", verify.k_max,
                         "Stage budget (0: deterministic only; default: every stage)");
  verify_cmd->add_option("--fallback", verify.fallback, "Finish after every stage failed")
      ->check(CLI::IsMember({"discard", "me", "guess"}))
      ->capture_default_str();
  verify_cmd->add_option("--workers", verify.workers, "Monte Carlo worker threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  verify_cmd->add_option("--out", verify.out, "Write the checks as CSV");
  verify_cmd->add_flag("--corrupt-analytic", verify.corrupt_analytic,
                       "Self-test: perturb the closed forms so verification fails");
  add_config(verify_cmd);

  SweepOptions sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Closed-form quantities over a squared-coefficient grid");
  sweep_cmd->add_option("--D", sweep.dim, "Qudit dimension D")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  sweep_cmd->add_option("--N", sweep.rank, "Schmidt rank N")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  sweep_cmd->add_option("--grid", sweep.grid, "Points per free squared coefficient")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  sweep_cmd->add_option("--quantities", sweep.quantities,
                        "Comma-separated columns (default: all)");
  sweep_cmd->add_option("--tie-tol", sweep.tie_tolerance, "Coefficients closer than this are tied")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--workers", sweep.workers, "Grid worker threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "Output CSV path (default: standard output)");
  add_config(sweep_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) {
      apply_config(sub, config_path);
    }
    if (sub == report_cmd) {
      return cmd_report(report, out);
    }
    if (sub == plan_cmd) {
      return cmd_plan(plan, out);
    }
    if (sub == verify_cmd) {
      return cmd_verify(verify, out);
    }
    return cmd_sweep(sweep, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "internal check failed: " << e.what() << '\n';
    return kExitVerifyFailed;
  }
}

}  // namespace mctele::cli
