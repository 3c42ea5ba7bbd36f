// Copyright 2026 The Gridmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. One verb per library entry point:
//   allocate  run the scenario's mechanism and write/print the report
//   verify    audit the game-theoretic properties of one scenario
//   sweep     generate seeded scenarios in bulk and aggregate the audits
//   oracle    compare engine welfare against the brute-force search
//   generate  emit a seeded random scenario
// Exit codes: 0 ok, 2 parse/validation, 3 infeasible, 4 property violation
// or oracle mismatch, 1 anything else.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI/CLI11.hpp>

#include "gridmech/engine.hpp"
#include "gridmech/errors.hpp"
#include "gridmech/oracle.hpp"
#include "gridmech/scenario_io.hpp"

namespace {

using namespace gridmech;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitViolation = 4;

MechanismKind mechanism_arg(const std::string& name) {
  const std::optional<MechanismKind> kind = parse_mechanism(name);
  if (!kind) throw gridmech::ParseError("unknown mechanism '" + name + "'");
  return *kind;
}

ProductionPolicy policy_arg(const std::string& name) {
  const std::optional<ProductionPolicy> policy = parse_policy(name);
  if (!policy) throw gridmech::ParseError("unknown policy '" + name + "'");
  return *policy;
}

Case1Utility case1_utility_arg(const std::string& name) {
  if (name == "capped") return Case1Utility::kCappedGrant;
  if (name == "cost") return Case1Utility::kConsumptionCost;
  throw gridmech::ParseError("unknown case-1 utility model '" + name + "'");
}

void print_verdict(const PropertyVerdict& verdict) {
  std::cout << std::left << std::setw(24) << verdict.property << std::setw(10)
            << to_string(verdict.status)
            << "margin=" << format_double(verdict.margin);
  if (verdict.witness) {
    std::cout << "  [";
    if (verdict.witness->user >= 0) {
      std::cout << "user=" << verdict.witness->user << " ";
    }
    if (!std::isnan(verdict.witness->factor)) {
      std::cout << "factor=" << format_double(verdict.witness->factor) << " ";
    }
    std::cout << verdict.witness->detail << "]";
  }
  std::cout << "\n";
}

struct PropertyFlags {
  double tolerance = 1e-9;
  std::vector<double> grid;
  std::string case1_utility = "capped";
  bool no_oracle = false;
  double resolution = 0.5;
  double budget = 1e7;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tolerance", tolerance,
                    "assertion tolerance (default 1e-9)");
    cmd->add_option("--grid", grid,
                    "misreport factors (default 0,0.25,...,2)");
    cmd->add_option("--case1-utility", case1_utility,
                    "case-1 utility model: capped|cost");
    cmd->add_flag("--no-oracle", no_oracle,
                  "skip the brute-force welfare comparison");
    cmd->add_option("--resolution", resolution,
                    "oracle grid step in kW (default 0.5)");
    cmd->add_option("--budget", budget,
                    "oracle search budget in grid points (default 1e7)");
  }

  PropertyOptions options() const {
    PropertyOptions opts;
    opts.tolerance = tolerance;
    opts.factors = grid;
    opts.case1_utility = case1_utility_arg(case1_utility);
    opts.with_oracle = !no_oracle;
    opts.oracle.resolution = resolution;
    opts.oracle.budget = budget;
    opts.run.eps = tolerance;
    return opts;
  }
};

struct GenerateFlags {
  std::uint64_t seed = 0;
  Index users = 3;
  Index slots = 1;
  std::string mechanism = "case3";
  std::string policy = "tight";
  double demand_min = 0.5;
  double demand_max = 8.0;
  double slot_hours = 1.0;
  double production = 10.0;
  double c = 1.0;
  double k = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "generator seed (default 0)");
    cmd->add_option("--users", users, "user count (default 3)");
    cmd->add_option("--slots", slots,
                    "slot count; forced to 1 for cases 1-3 (default 1)");
    cmd->add_option("--mechanism", mechanism, "case1..case6 (default case3)");
    cmd->add_option("--policy", policy,
                    "production policy: tight|loose|fixed (default tight)");
    cmd->add_option("--demand-min", demand_min, "kW (default 0.5)");
    cmd->add_option("--demand-max", demand_max, "kW (default 8)");
    cmd->add_option("--slot-hours", slot_hours, "hours per slot (default 1)");
    cmd->add_option("--production", production,
                    "fixed production level in kW (policy fixed only)");
    cmd->add_option("--c", c, "case-6 free fraction of production (0,1]");
    cmd->add_option("--k", k, "case-6 overshoot charge slope (>= 0)");
  }

  GenerateOptions options() const {
    GenerateOptions opts;
    opts.seed = seed;
    opts.users = users;
    opts.slots = slots;
    opts.mechanism = mechanism_arg(mechanism);
    opts.policy = policy_arg(policy);
    opts.demand_min = demand_min;
    opts.demand_max = demand_max;
    opts.slot_hours = slot_hours;
    opts.fixed_production = production;
    opts.params.c = c;
    opts.params.k = k;
    return opts;
  }
};

int cmd_allocate(const std::string& scenario_path, const std::string& out,
                 double tolerance) {
  const Scenario s = load_scenario(scenario_path);
  RunOptions run;
  run.eps = tolerance;
  const MechanismResult result = run_mechanism(s, run);
  const ReportDocument doc = build_report(s, result);
  if (!out.empty()) {
    write_report(doc, out);
    std::cout << doc.digest << "\n";
  } else {
    std::cout << report_to_json(doc).dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& scenario_path, const std::string& out,
               const PropertyFlags& flags) {
  const Scenario s = load_scenario(scenario_path);
  const PropertyOptions opts = flags.options();
  const PropertyReport report = check_properties(s, opts);
  for (const PropertyVerdict& verdict : report.verdicts) {
    print_verdict(verdict);
  }
  if (!out.empty()) {
    const MechanismResult result = run_mechanism(s, opts.run);
    write_report(build_report(s, result, report), out);
  }
  return report.any_violated() ? kExitViolation : kExitOk;
}

int cmd_oracle(const std::string& scenario_path, const PropertyFlags& flags) {
  const Scenario s = load_scenario(scenario_path);
  RunOptions run;
  run.eps = flags.tolerance;
  const MechanismResult result = run_mechanism(s, run);
  OracleOptions opts;
  opts.resolution = flags.resolution;
  opts.budget = flags.budget;
  const OracleOutcome oracle = brute_force_outcome(s, opts);
  const double allowed = oracle_welfare_tolerance(s, flags.resolution);
  const double gap = std::abs(result.welfare - oracle.welfare);
  std::cout << "engine_welfare=" << format_double(result.welfare) << "\n"
            << "oracle_welfare=" << format_double(oracle.welfare) << "\n"
            << "gap=" << format_double(gap) << "\n"
            << "allowed=" << format_double(allowed) << "\n";
  return gap <= allowed + flags.tolerance ? kExitOk : kExitViolation;
}

int cmd_sweep(std::uint64_t seed, int count, const GenerateFlags& gen,
              const PropertyFlags& flags, const std::string& out_dir) {
  struct Stat {
    int holds = 0;
    int violated = 0;
    int recorded = 0;
    double worst = std::numeric_limits<double>::infinity();
  };
  std::vector<std::pair<std::string, Stat>> stats;
  const auto stat_for = [&stats](const std::string& name) -> Stat& {
    for (auto& entry : stats) {
      if (entry.first == name) return entry.second;
    }
    stats.emplace_back(name, Stat{});
    return stats.back().second;
  };

  const PropertyOptions opts = flags.options();
  int infeasible = 0;
  bool any_violation = false;
  for (int i = 0; i < count; ++i) {
    GenerateOptions gopts = gen.options();
    gopts.seed = seed + static_cast<std::uint64_t>(i);
    const Scenario s = generate_scenario(gopts);
    PropertyReport report;
    try {
      report = check_properties(s, opts);
    } catch (const InfeasibleError&) {
      ++infeasible;
      continue;
    }
    for (const PropertyVerdict& verdict : report.verdicts) {
      Stat& stat = stat_for(verdict.property);
      switch (verdict.status) {
        case PropertyStatus::kHolds:
          ++stat.holds;
          break;
        case PropertyStatus::kViolated:
          ++stat.violated;
          any_violation = true;
          break;
        case PropertyStatus::kRecordedOnly:
          ++stat.recorded;
          break;
      }
      if (!std::isnan(verdict.margin)) {
        stat.worst = std::min(stat.worst, verdict.margin);
      }
      if (verdict.status == PropertyStatus::kViolated) {
        std::cout << "violation at seed " << gopts.seed << ":\n  ";
        print_verdict(verdict);
      }
    }
    if (!out_dir.empty()) {
      const MechanismResult result = run_mechanism(s, opts.run);
      write_report(build_report(s, result, report),
                   out_dir + "/sweep_" + std::to_string(gopts.seed) + ".json");
    }
  }

  std::cout << "scenarios=" << count << " infeasible=" << infeasible << "\n";
  for (const auto& [name, stat] : stats) {
    std::cout << std::left << std::setw(24) << name << "holds=" << stat.holds
              << " violated=" << stat.violated
              << " recorded=" << stat.recorded
              << " worst_margin=" << format_double(stat.worst) << "\n";
  }
  return any_violation ? kExitViolation : kExitOk;
}

int cmd_generate(const GenerateFlags& gen, const std::string& out) {
  const Scenario s = generate_scenario(gen.options());
  if (!out.empty()) {
    save_scenario(s, out);
    std::cout << scenario_digest(s) << "\n";
  } else {
    std::cout << scenario_to_json(s).dump(2) << "\n";
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Capacity-constrained power allocation with pivot payments"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out;
  double tolerance = 1e-9;

  CLI::App* allocate = app.add_subcommand("allocate", "run one scenario");
  allocate->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required();
  allocate->add_option("--out", out, "report path (JSON; CSV written beside)");
  allocate->add_option("--tolerance", tolerance, "feasibility epsilon");

  PropertyFlags verify_flags;
  CLI::App* verify = app.add_subcommand("verify", "audit one scenario");
  verify->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required();
  verify->add_option("--out", out, "report path (JSON; CSV written beside)");
  verify_flags.attach(verify);

  PropertyFlags oracle_flags;
  CLI::App* oracle =
      app.add_subcommand("oracle", "engine vs brute-force welfare");
  oracle->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required();
  oracle_flags.attach(oracle);

  GenerateFlags sweep_gen;
  PropertyFlags sweep_flags;
  int sweep_count = 100;
  std::string out_dir;
  CLI::App* sweep = app.add_subcommand("sweep", "bulk property campaign");
  sweep->add_option("--count", sweep_count, "scenario count (default 100)");
  sweep->add_option("--out-dir", out_dir, "write one report per scenario");
  sweep_gen.attach(sweep);
  sweep_flags.attach(sweep);

  GenerateFlags gen_flags;
  CLI::App* generate =
      app.add_subcommand("generate", "emit a seeded scenario");
  generate->add_option("--out", out, "scenario path (prints digest)");
  gen_flags.attach(generate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (app.got_subcommand(allocate)) {
    return cmd_allocate(scenario_path, out, tolerance);
  }
  if (app.got_subcommand(verify)) {
    return cmd_verify(scenario_path, out, verify_flags);
  }
  if (app.got_subcommand(oracle)) {
    return cmd_oracle(scenario_path, oracle_flags);
  }
  if (app.got_subcommand(sweep)) {
    return cmd_sweep(sweep_gen.seed, sweep_count, sweep_gen, sweep_flags,
                     out_dir);
  }
  return cmd_generate(gen_flags, out);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gridmech::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    for (const gridmech::Violation& violation : err.violations) {
      std::cerr << "  - [" << gridmech::to_string(violation.code) << "] "
                << violation.message << "\n";
    }
    return kExitParse;
  } catch (const gridmech::ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitParse;
  } catch (const gridmech::InfeasibleError& err) {
    std::cerr << "infeasible: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitOther;
  }
}
