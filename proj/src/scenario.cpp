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

#include "gridmech/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace gridmech {

double energy_of(const PowerSeries& series) {
  double sum = 0.0;
  for (Index t = 0; t < series.values.size(); ++t) {
    sum += series.values[t] * series.slot_hours;
  }
  return sum;
}

const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kNonPositiveSlotDuration:
      return "NonPositiveSlotDuration";
    case ViolationCode::kEmptySeries:
      return "EmptySeries";
    case ViolationCode::kNonFiniteValue:
      return "NonFiniteValue";
    case ViolationCode::kNegativePower:
      return "NegativePower";
    case ViolationCode::kSeriesLengthMismatch:
      return "SeriesLengthMismatch";
    case ViolationCode::kSlotDurationMismatch:
      return "SlotDurationMismatch";
    case ViolationCode::kDuplicateUserId:
      return "DuplicateUserId";
    case ViolationCode::kPenaltyFractionOutOfRange:
      return "PenaltyFractionOutOfRange";
    case ViolationCode::kPenaltySlopeInvalid:
      return "PenaltySlopeInvalid";
    case ViolationCode::kMechanismSlotMismatch:
      return "MechanismSlotMismatch";
  }
  return "UnknownViolation";
}

namespace {

bool is_single_slot_mechanism(MechanismKind kind) {
  return kind == MechanismKind::kCase1 || kind == MechanismKind::kCase2 ||
         kind == MechanismKind::kCase3;
}

// Series-local invariants; `where` names the series in messages.
void check_series(const PowerSeries& series, const std::string& where,
                  std::vector<Violation>& out) {
  if (!(series.slot_hours > 0.0) || !std::isfinite(series.slot_hours)) {
    out.push_back({ViolationCode::kNonPositiveSlotDuration,
                   where + ": slot duration must be a positive finite number"});
  }
  if (series.values.size() == 0) {
    out.push_back({ViolationCode::kEmptySeries,
                   where + ": series needs at least one slot"});
  }
  for (Index t = 0; t < series.values.size(); ++t) {
    const double v = series.values[t];
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << where << ": slot " << t << " is not finite";
      out.push_back({ViolationCode::kNonFiniteValue, msg.str()});
    } else if (v < 0.0) {
      std::ostringstream msg;
      msg << where << ": slot " << t << " is negative (" << v << " kW)";
      out.push_back({ViolationCode::kNegativePower, msg.str()});
    }
  }
}

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;

  check_series(s.production, "production", out);

  std::set<std::string> seen_ids;
  for (const UserProfile& user : s.users) {
    const std::string where = "user '" + user.id + "' demand";
    check_series(user.demand, where, out);
    if (user.demand.values.size() != s.production.values.size()) {
      std::ostringstream msg;
      msg << where << ": " << user.demand.values.size()
          << " slots, production has " << s.production.values.size();
      out.push_back({ViolationCode::kSeriesLengthMismatch, msg.str()});
    }
    if (user.demand.slot_hours != s.production.slot_hours) {
      out.push_back({ViolationCode::kSlotDurationMismatch,
                     where + ": slot duration differs from production's"});
    }
    if (!seen_ids.insert(user.id).second) {
      out.push_back({ViolationCode::kDuplicateUserId,
                     "user id '" + user.id + "' appears more than once"});
    }
  }

  if (!(s.params.c > 0.0) || s.params.c > 1.0 || !std::isfinite(s.params.c)) {
    out.push_back({ViolationCode::kPenaltyFractionOutOfRange,
                   "params.c must lie in (0, 1]"});
  }
  if (!(s.params.k >= 0.0) || !std::isfinite(s.params.k)) {
    out.push_back({ViolationCode::kPenaltySlopeInvalid,
                   "params.k must be finite and >= 0"});
  }

  if (is_single_slot_mechanism(s.mechanism) && s.slot_count() != 1) {
    std::ostringstream msg;
    msg << "mechanism handles a single slot but the scenario has "
        << s.slot_count();
    out.push_back({ViolationCode::kMechanismSlotMismatch, msg.str()});
  }

  return out;
}

PowerSeries aggregate_demand(const Scenario& s) {
  PowerSeries total;
  total.slot_hours = s.slot_hours();
  total.values = Eigen::VectorXd::Zero(s.slot_count());
  for (const UserProfile& user : s.users) {
    total.values += user.demand.values;
  }
  return total;
}

Eigen::VectorXd headroom(const Scenario& s) {
  return s.production.values - aggregate_demand(s).values;
}

Eigen::MatrixXd demand_matrix(const Scenario& s) {
  Eigen::MatrixXd x(s.user_count(), s.slot_count());
  for (Index i = 0; i < s.user_count(); ++i) {
    x.row(i) = s.users[static_cast<size_t>(i)].demand.values.transpose();
  }
  return x;
}

Scenario remove_user(const Scenario& s, Index i) {
  Scenario sub = s;
  sub.users.erase(sub.users.begin() + static_cast<std::ptrdiff_t>(i));
  return sub;
}

Scenario scale_user_demand(const Scenario& s, Index i, double factor) {
  Scenario scaled = s;
  scaled.users[static_cast<size_t>(i)].demand.values *= factor;
  return scaled;
}

}  // namespace gridmech
