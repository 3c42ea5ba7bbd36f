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

#include <string>
#include <vector>

#include <Eigen/Dense>

// Domain model for capacity-constrained power allocation.
//
// Conventions shared by every module:
//   - power in kW, energy in kWh, money in units worth one kWh;
//   - time is a row of uniform slots, so energy integrals are sums scaled by
//     the slot duration;
//   - users keep their declaration order everywhere (vector row i is user i).
//
// All types are plain values; every operation is a pure function of its
// arguments, so concurrent use needs no synchronization.

namespace gridmech {

using Eigen::Index;

/// A quantity sampled over uniform time slots: values[t] is the kW level
/// during slot t, slot_hours the width of one slot in hours.
struct PowerSeries {
  Eigen::VectorXd values;
  double slot_hours = 1.0;
};

/// Energy carried by the series, in kWh.
double energy_of(const PowerSeries& series);

/// One consumer and the power they declared they need per slot.
struct UserProfile {
  std::string id;
  PowerSeries demand;
};

/// The allocation rule a scenario requests. Wire names are "case1".."case6".
enum class MechanismKind {
  kCase1,  // single slot: all-or-nothing gate on the aggregate demand
  kCase2,  // single slot: subset selection under the production cap
  kCase3,  // single slot: divisible fill, rationed proportionally
  kCase4,  // any slot count: demand shifting with per-user energy floors
  kCase5,  // any slot count: fixed proportional rule applied per slot
  kCase6,  // any slot count: energy ceilings plus an overshoot charge
};

/// Overshoot pricing for case 6: consumption beyond fraction `c` of the
/// slot's production is charged at slope `k` per kW of overshoot.
struct PenaltyParams {
  double c = 1.0;  // in (0, 1]
  double k = 1.0;  // >= 0
};

struct Scenario {
  std::vector<UserProfile> users;
  PowerSeries production;
  MechanismKind mechanism = MechanismKind::kCase3;
  PenaltyParams params;

  Index user_count() const { return static_cast<Index>(users.size()); }
  Index slot_count() const { return production.values.size(); }
  double slot_hours() const { return production.slot_hours; }
};

enum class ViolationCode {
  kNonPositiveSlotDuration,
  kEmptySeries,
  kNonFiniteValue,
  kNegativePower,
  kSeriesLengthMismatch,
  kSlotDurationMismatch,
  kDuplicateUserId,
  kPenaltyFractionOutOfRange,
  kPenaltySlopeInvalid,
  kMechanismSlotMismatch,
};

const char* to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;  // names the offending user/slot/field
};

/// Every invariant violation in `s`, empty iff every other operation in this
/// library accepts the scenario. Single-slot mechanisms (cases 1-3) on a
/// multi-slot scenario are reported as kMechanismSlotMismatch.
std::vector<Violation> validate_scenario(const Scenario& s);

/// Slot-wise sum of all user demands (a zero series when there are no
/// users). Pre: valid scenario.
PowerSeries aggregate_demand(const Scenario& s);

/// production - aggregate demand per slot, in kW. Negative entries mean the
/// declared demand overshoots production. Pre: valid scenario.
Eigen::VectorXd headroom(const Scenario& s);

/// Demands stacked as a (users x slots) matrix. Pre: valid scenario.
Eigen::MatrixXd demand_matrix(const Scenario& s);

/// Copy of `s` without user `i`. Pre: 0 <= i < user_count.
Scenario remove_user(const Scenario& s, Index i);

/// Copy of `s` with user i's demand scaled by `factor` (a misreport).
/// Pre: 0 <= i < user_count, factor >= 0 finite.
Scenario scale_user_demand(const Scenario& s, Index i, double factor);

}  // namespace gridmech
