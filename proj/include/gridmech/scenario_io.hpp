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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gridmech/engine.hpp"
#include "gridmech/oracle.hpp"
#include "gridmech/scenario.hpp"

// File formats, seeded scenario generation, and report assembly.
//
// Scenario files are JSON with the shape
//   { "slot_duration_h": 1.0,
//     "production": [10.0, ...],
//     "users": [ {"id": "u0", "demand": [3.0, ...]}, ... ],
//     "mechanism": "case1" .. "case6",
//     "params": {"c": 1.0, "k": 1.0} }          (optional, case6 only)
// Numbers are written with the shortest decimal form that parses back to the
// same double, so serialization is lossless and byte-deterministic.

namespace gridmech {

using json = nlohmann::ordered_json;

const char* to_string(MechanismKind kind);
std::optional<MechanismKind> parse_mechanism(const std::string& name);

// ---------------------------------------------------------------------------
// Scenario serialization
// ---------------------------------------------------------------------------

/// Canonical JSON form of a scenario (fixed key order, see file header).
json scenario_to_json(const Scenario& s);

/// Parses the canonical form. Throws ParseError naming the offending field;
/// does not validate domain invariants (see load_scenario).
Scenario scenario_from_json(const json& doc);

/// Reads and parses a scenario file, then validates it. Throws ParseError on
/// malformed documents and ValidationError carrying the violation list.
Scenario load_scenario(const std::string& path);

/// Serializes atomically (temp file + rename in the target directory).
void save_scenario(const Scenario& s, const std::string& path);

/// Content hash of the canonical serialization, "fnv1a64:" + 16 hex digits.
/// Stable across runs and platforms for identical scenarios.
std::string scenario_digest(const Scenario& s);

// ---------------------------------------------------------------------------
// Seeded generation
// ---------------------------------------------------------------------------

enum class ProductionPolicy {
  kTight,  // production[t] = 0.8 * aggregate demand[t]; forces rationing
  kLoose,  // production[t] = 1.2 * aggregate demand[t]; headroom everywhere
  kFixed,  // production[t] = fixed_production in every slot
};

const char* to_string(ProductionPolicy policy);
std::optional<ProductionPolicy> parse_policy(const std::string& name);

struct GenerateOptions {
  std::uint64_t seed = 0;
  Index users = 3;
  Index slots = 1;  // forced to 1 for the single-slot mechanisms (cases 1-3)
  double demand_min = 0.5;  // kW
  double demand_max = 8.0;  // kW
  double slot_hours = 1.0;
  MechanismKind mechanism = MechanismKind::kCase3;
  ProductionPolicy policy = ProductionPolicy::kTight;
  double fixed_production = 10.0;  // kW, used by kFixed only
  PenaltyParams params;
};

/// Deterministic scenario from a seed: identical options give a byte-identical
/// serialized scenario on every run and platform. Demands are uniform in
/// [demand_min, demand_max] rounded to 3 decimals; production follows the
/// policy (tight/loose are derived per slot and left unrounded).
Scenario generate_scenario(const GenerateOptions& options);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ReportDocument {
  Scenario scenario;
  MechanismResult result;
  std::optional<PropertyReport> properties;
  std::string digest;  // scenario_digest of `scenario`
};

ReportDocument build_report(const Scenario& s, const MechanismResult& result,
                            std::optional<PropertyReport> properties = {});

/// JSON form: digest, mechanism, per-user rows (id, granted, valuation,
/// payment, utility, pivotal), welfare, per-slot trend rows, and the property
/// verdicts when present. Non-finite margins serialize as strings.
json report_to_json(const ReportDocument& doc);

/// Flat trends table, one row per slot. Header is fixed:
///   t,production,agg_demand,agg_grant,headroom,grant_<id>...
/// and per slot: production - agg_demand = headroom holds exactly.
std::string report_trends_csv(const ReportDocument& doc);

/// Writes the JSON report to `json_path` and the CSV beside it (extension
/// replaced by ".trends.csv"). Both writes are atomic (temp + rename).
void write_report(const ReportDocument& doc, const std::string& json_path);

/// Shortest lossless decimal form of a double (also used for CSV cells).
std::string format_double(double value);

}  // namespace gridmech
