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

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gridmech/engine.hpp"
#include "gridmech/scenario.hpp"

// Independent checking machinery: a brute-force search over discretized
// outcomes, misreport sweeps that measure whether lying ever pays, and a
// one-call property audit. Nothing here reuses the mechanisms' optimization
// paths; welfare and feasibility are recomputed from first principles so the
// oracle can catch a wrong solver.

namespace gridmech {

// ---------------------------------------------------------------------------
// Brute-force outcome search
// ---------------------------------------------------------------------------

struct OracleOptions {
  double resolution = 0.5;  // kW grid step for divisible cases
  double budget = 1e7;      // max grid points before BudgetExceededError
};

struct OracleOutcome {
  Allocation allocation;  // a welfare-maximizing grid point
  double welfare = 0.0;   // currency
};

/// Exhaustive welfare maximization over the mechanism's outcome space:
/// both binary outcomes (case 1), every subset (case 2), or a kW grid over
/// the grant entries (cases 3-6; grants range up to the demand, and for
/// case 4 up to the slot's production, with the exact demand and production
/// levels always included as grid points). Constraints and welfare are
/// evaluated independently of the solvers. Throws BudgetExceededError when
/// the grid exceeds the budget and InfeasibleError when no grid point
/// satisfies case 4's energy floors.
OracleOutcome brute_force_outcome(const Scenario& s,
                                  const OracleOptions& options = {});

/// Engine-vs-oracle welfare agreement bound for a scenario: 0 for the exact
/// cases (1 and 2), resolution * users * slots * slot_hours for grid cases.
double oracle_welfare_tolerance(const Scenario& s, double resolution);

/// The closed-form pivot payment for case 3, derived from the rationing
/// shape: with C = sum of the other users' demands, user i owes their full
/// grant when the others alone already exceed production, owes
/// C - (production - grant_i) when rationing is caused jointly, and owes
/// nothing when nobody is rationed. Currency (scaled by slot_hours).
double case3_payment_formula(const Scenario& s, const Allocation& a, Index i);

// ---------------------------------------------------------------------------
// Misreport sweeps
// ---------------------------------------------------------------------------

/// How a user's realized utility is measured when their report shaped the
/// outcome but their true demand decides what the power is worth.
enum class Case1Utility {
  // Granted power capped at the true demand; in the all-or-nothing cases a
  // grant below the true demand is worthless. Records case 1's known
  // incentive to underreport.
  kCappedGrant,
  // Case-1 alternative: a served user bears the consumption cost of their
  // true demand; a denied user values the outcome at zero yet still pays.
  // Under this reading truth-telling is weakly dominant in case 1.
  kConsumptionCost,
};

struct SweepOptions {
  std::vector<double> factors;  // empty selects the default 9-factor grid
  Case1Utility case1_utility = Case1Utility::kCappedGrant;
  RunOptions run;
};

/// The default misreport grid {0, 0.25, ..., 2.0} (always contains 1).
const std::vector<double>& default_misreport_factors();

struct MisreportSample {
  double factor = 1.0;
  double utility = 0.0;  // realized utility under the scaled report
  bool skipped = false;  // rebuilt scenario infeasible (case 4)
};

struct MisreportSweep {
  Index user = 0;
  double truthful_utility = 0.0;
  std::vector<MisreportSample> samples;  // one per factor, factor order kept

  /// min over non-skipped samples of (truthful - sample); >= 0 when honesty
  /// was optimal on the grid, +inf when every sample was skipped.
  double worst_margin() const;
};

/// Realized utility of `user` (true demand from `truth`) when `reported` was
/// run instead: value of the granted power under the chosen utility model,
/// minus the payment charged. Pre: same user count and slot grid.
double experienced_utility(const Scenario& truth, Index user,
                           const Scenario& reported,
                           const MechanismResult& outcome, Case1Utility model);

/// Reruns the mechanism with user i's demand scaled by every factor and
/// reports the realized utility of each lie next to the truthful baseline.
/// Factor 1.0 reproduces the truthful utility bit for bit. Case-4 rebuilds
/// that turn infeasible are marked skipped.
MisreportSweep misreport_sweep(const Scenario& s, Index user,
                               const SweepOptions& options = {});

// ---------------------------------------------------------------------------
// Property audit
// ---------------------------------------------------------------------------

enum class PropertyStatus { kHolds, kViolated, kRecordedOnly };

const char* to_string(PropertyStatus status);

struct PropertyWitness {
  Scenario scenario;    // scenario that exhibits the worst margin
  Index user = -1;      // offending user, -1 when not user-specific
  double factor = std::numeric_limits<double>::quiet_NaN();  // misreport factor
  std::string detail;
};

struct PropertyVerdict {
  std::string property;
  PropertyStatus status = PropertyStatus::kHolds;
  double margin = std::numeric_limits<double>::infinity();
  std::optional<PropertyWitness> witness;  // always present when violated
};

struct PropertyReport {
  std::vector<PropertyVerdict> verdicts;

  const PropertyVerdict* find(const std::string& property) const;
  bool any_violated() const;
};

struct PropertyOptions {
  double tolerance = 1e-9;
  std::vector<double> factors;  // empty selects the default grid
  Case1Utility case1_utility = Case1Utility::kCappedGrant;
  bool with_oracle = true;      // welfare-vs-oracle check, budget permitting
  OracleOptions oracle;
  RunOptions run;
};

/// Audits one scenario: capacity, full utilization (case 3), proportionality
/// (case 5), no positive transfers, individual rationality, the truthfulness
/// sweep over every user, and welfare against the brute-force oracle when the
/// budget allows. Properties the mechanism is known not to guarantee are
/// recorded with their margins but never marked violated:
///   - individual rationality is asserted for cases 2-4 only;
///   - truthfulness is asserted for cases 2-3, and for case 1 only under the
///     kConsumptionCost utility model;
///   - welfare-vs-oracle is recorded (not asserted) for case 5.
/// Margins count toward violation when below -tolerance. Throws
/// ValidationError / InfeasibleError like run_mechanism.
PropertyReport check_properties(const Scenario& s,
                                const PropertyOptions& options = {});

}  // namespace gridmech
