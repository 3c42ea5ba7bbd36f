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

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <utility>

#include "gridmech/scenario_io.hpp"

#include "gridmech/errors.hpp"

namespace gridmech {

namespace {

bool single_slot_kind(MechanismKind kind) {
  return kind == MechanismKind::kCase1 || kind == MechanismKind::kCase2 ||
         kind == MechanismKind::kCase3;
}

// NaN and infinities have no JSON number form; they travel as strings.
json number_or_string(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

const json& require(const json& doc, const char* key, const char* where) {
  if (!doc.contains(key)) {
    throw ParseError(std::string(where) + ": missing field '" + key + "'");
  }
  return doc.at(key);
}

double as_number(const json& node, const std::string& where) {
  if (!node.is_number()) {
    throw ParseError(where + ": expected a number");
  }
  return node.get<double>();
}

Eigen::VectorXd as_series(const json& node, const std::string& where) {
  if (!node.is_array()) {
    throw ParseError(where + ": expected an array of numbers");
  }
  Eigen::VectorXd values(static_cast<Index>(node.size()));
  Index t = 0;
  for (const json& entry : node) {
    values[t] = as_number(entry, where + "[" + std::to_string(t) + "]");
    ++t;
  }
  return values;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp(target);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out.good()) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, target);  // atomic on POSIX when both live in one directory
}

}  // namespace

const char* to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kCase1:
      return "case1";
    case MechanismKind::kCase2:
      return "case2";
    case MechanismKind::kCase3:
      return "case3";
    case MechanismKind::kCase4:
      return "case4";
    case MechanismKind::kCase5:
      return "case5";
    case MechanismKind::kCase6:
      return "case6";
  }
  return "case3";
}

std::optional<MechanismKind> parse_mechanism(const std::string& name) {
  for (MechanismKind kind :
       {MechanismKind::kCase1, MechanismKind::kCase2, MechanismKind::kCase3,
        MechanismKind::kCase4, MechanismKind::kCase5, MechanismKind::kCase6}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scenario serialization
// ---------------------------------------------------------------------------

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["slot_duration_h"] = s.slot_hours();
  json production = json::array();
  for (Index t = 0; t < s.slot_count(); ++t) {
    production.push_back(s.production.values[t]);
  }
  doc["production"] = std::move(production);
  json users = json::array();
  for (const UserProfile& user : s.users) {
    json row;
    row["id"] = user.id;
    json demand = json::array();
    for (Index t = 0; t < user.demand.values.size(); ++t) {
      demand.push_back(user.demand.values[t]);
    }
    row["demand"] = std::move(demand);
    users.push_back(std::move(row));
  }
  doc["users"] = std::move(users);
  doc["mechanism"] = to_string(s.mechanism);
  if (s.mechanism == MechanismKind::kCase6) {
    // The penalty parameters only mean something to case 6; keeping them out
    // of the other cases' canonical form keeps digests insensitive to fields
    // that cannot change the outcome.
    doc["params"] = json{{"c", s.params.c}, {"k", s.params.k}};
  }
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ParseError("scenario: expected a JSON object");
  }
  Scenario s;
  s.production.slot_hours =
      as_number(require(doc, "slot_duration_h", "scenario"), "slot_duration_h");
  s.production.values = as_series(require(doc, "production", "scenario"),
                                  "production");

  const json& users = require(doc, "users", "scenario");
  if (!users.is_array()) {
    throw ParseError("users: expected an array");
  }
  Index index = 0;
  for (const json& row : users) {
    const std::string where = "users[" + std::to_string(index) + "]";
    if (!row.is_object()) {
      throw ParseError(where + ": expected an object");
    }
    UserProfile user;
    const json& id = require(row, "id", where.c_str());
    if (!id.is_string()) {
      throw ParseError(where + ".id: expected a string");
    }
    user.id = id.get<std::string>();
    user.demand.values =
        as_series(require(row, "demand", where.c_str()), where + ".demand");
    user.demand.slot_hours = s.production.slot_hours;
    s.users.push_back(std::move(user));
    ++index;
  }

  const json& mechanism = require(doc, "mechanism", "scenario");
  if (!mechanism.is_string()) {
    throw ParseError("mechanism: expected a string");
  }
  const std::optional<MechanismKind> kind =
      parse_mechanism(mechanism.get<std::string>());
  if (!kind) {
    throw ParseError("mechanism: unknown name '" +
                     mechanism.get<std::string>() + "'");
  }
  s.mechanism = *kind;

  if (doc.contains("params")) {
    const json& params = doc.at("params");
    if (!params.is_object()) {
      throw ParseError("params: expected an object");
    }
    if (params.contains("c")) s.params.c = as_number(params.at("c"), "params.c");
    if (params.contains("k")) s.params.k = as_number(params.at("k"), "params.k");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    throw ParseError("cannot open " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ParseError(path + ": " + err.what());
  }
  Scenario s = scenario_from_json(doc);
  std::vector<Violation> violations = validate_scenario(s);
  if (!violations.empty()) {
    std::string what = path + ": " + std::to_string(violations.size()) +
                       " violation(s); first: " + violations.front().message;
    throw ValidationError(std::move(what), std::move(violations));
  }
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  write_text_atomic(path, scenario_to_json(s).dump(2) + "\n");
}

std::string scenario_digest(const Scenario& s) {
  const std::string bytes = scenario_to_json(s).dump();
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

// ---------------------------------------------------------------------------
// Seeded generation
// ---------------------------------------------------------------------------

const char* to_string(ProductionPolicy policy) {
  switch (policy) {
    case ProductionPolicy::kTight:
      return "tight";
    case ProductionPolicy::kLoose:
      return "loose";
    case ProductionPolicy::kFixed:
      return "fixed";
  }
  return "tight";
}

std::optional<ProductionPolicy> parse_policy(const std::string& name) {
  for (ProductionPolicy policy :
       {ProductionPolicy::kTight, ProductionPolicy::kLoose,
        ProductionPolicy::kFixed}) {
    if (name == to_string(policy)) return policy;
  }
  return std::nullopt;
}

Scenario generate_scenario(const GenerateOptions& options) {
  const Index slots = single_slot_kind(options.mechanism) ? 1 : options.slots;
  std::mt19937_64 gen(options.seed);
  // Top 53 bits of the raw draw, mapped into [0, 1). Unlike the distribution
  // templates, this is pinned by the standard, so every toolchain produces
  // the same stream for a seed.
  const auto uniform01 = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };

  Scenario s;
  s.mechanism = options.mechanism;
  s.params = options.params;
  s.production.slot_hours = options.slot_hours;
  s.production.values = Eigen::VectorXd::Zero(slots);

  for (Index i = 0; i < options.users; ++i) {
    UserProfile user;
    user.id = "u" + std::to_string(i);
    user.demand.slot_hours = options.slot_hours;
    user.demand.values = Eigen::VectorXd(slots);
    for (Index t = 0; t < slots; ++t) {
      const double raw = options.demand_min +
                         uniform01() * (options.demand_max - options.demand_min);
      user.demand.values[t] = std::round(raw * 1000.0) / 1000.0;
    }
    s.users.push_back(std::move(user));
  }

  const PowerSeries aggregate = aggregate_demand(s);
  for (Index t = 0; t < slots; ++t) {
    switch (options.policy) {
      case ProductionPolicy::kTight:
        s.production.values[t] = 0.8 * aggregate.values[t];
        break;
      case ProductionPolicy::kLoose:
        s.production.values[t] = 1.2 * aggregate.values[t];
        break;
      case ProductionPolicy::kFixed:
        s.production.values[t] = options.fixed_production;
        break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

ReportDocument build_report(const Scenario& s, const MechanismResult& result,
                            std::optional<PropertyReport> properties) {
  ReportDocument doc;
  doc.scenario = s;
  doc.result = result;
  doc.properties = std::move(properties);
  doc.digest = scenario_digest(s);
  return doc;
}

json report_to_json(const ReportDocument& doc) {
  const Scenario& s = doc.scenario;
  const MechanismResult& result = doc.result;
  json out;
  out["digest"] = doc.digest;
  out["mechanism"] = to_string(s.mechanism);
  out["slot_duration_h"] = s.slot_hours();
  out["welfare"] = result.welfare;

  json users = json::array();
  for (Index i = 0; i < s.user_count(); ++i) {
    json row;
    row["id"] = s.users[static_cast<size_t>(i)].id;
    json granted = json::array();
    for (Index t = 0; t < result.allocation.slot_count(); ++t) {
      granted.push_back(result.allocation.grants(i, t));
    }
    row["granted"] = std::move(granted);
    row["valuation"] = result.valuations[i];
    row["payment"] = result.payments[i];
    row["utility"] = result.utilities[i];
    row["pivotal"] = static_cast<bool>(result.pivotal[static_cast<size_t>(i)]);
    users.push_back(std::move(row));
  }
  out["users"] = std::move(users);

  const PowerSeries aggregate = aggregate_demand(s);
  json trends = json::array();
  for (Index t = 0; t < s.slot_count(); ++t) {
    double column = 0.0;
    for (Index i = 0; i < s.user_count(); ++i) {
      column += result.allocation.grants(i, t);
    }
    json row;
    row["t"] = static_cast<std::int64_t>(t);
    row["production"] = s.production.values[t];
    row["agg_demand"] = aggregate.values[t];
    row["agg_grant"] = column;
    row["headroom"] = s.production.values[t] - aggregate.values[t];
    trends.push_back(std::move(row));
  }
  out["trends"] = std::move(trends);

  if (doc.properties) {
    json verdicts = json::array();
    for (const PropertyVerdict& verdict : doc.properties->verdicts) {
      json row;
      row["property"] = verdict.property;
      row["status"] = to_string(verdict.status);
      row["margin"] = number_or_string(verdict.margin);
      if (verdict.witness) {
        json witness;
        witness["scenario"] = scenario_to_json(verdict.witness->scenario);
        witness["user"] = static_cast<std::int64_t>(verdict.witness->user);
        witness["factor"] = number_or_string(verdict.witness->factor);
        witness["detail"] = verdict.witness->detail;
        row["witness"] = std::move(witness);
      }
      verdicts.push_back(std::move(row));
    }
    out["properties"] = std::move(verdicts);
  }
  return out;
}

std::string report_trends_csv(const ReportDocument& doc) {
  const Scenario& s = doc.scenario;
  std::string out = "t,production,agg_demand,agg_grant,headroom";
  for (const UserProfile& user : s.users) {
    out += ",grant_" + user.id;
  }
  out += "\n";

  const PowerSeries aggregate = aggregate_demand(s);
  for (Index t = 0; t < s.slot_count(); ++t) {
    double column = 0.0;
    for (Index i = 0; i < s.user_count(); ++i) {
      column += doc.result.allocation.grants(i, t);
    }
    out += std::to_string(t);
    out += "," + format_double(s.production.values[t]);
    out += "," + format_double(aggregate.values[t]);
    out += "," + format_double(column);
    out += "," + format_double(s.production.values[t] - aggregate.values[t]);
    for (Index i = 0; i < s.user_count(); ++i) {
      out += "," + format_double(doc.result.allocation.grants(i, t));
    }
    out += "\n";
  }
  return out;
}

void write_report(const ReportDocument& doc, const std::string& json_path) {
  write_text_atomic(json_path, report_to_json(doc).dump(2) + "\n");
  std::filesystem::path csv(json_path);
  csv.replace_extension("");
  csv += ".trends.csv";
  write_text_atomic(csv.string(), report_trends_csv(doc));
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "0";  // 64 bytes always suffice; belt braces
  return std::string(buffer, ptr);
}

}  // namespace gridmech
