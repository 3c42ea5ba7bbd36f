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

#include <functional>
#include <vector>

#include "gridmech/allocation.hpp"
#include "gridmech/mechanisms.hpp"
#include "gridmech/scenario.hpp"

// Payment engine: welfare-maximizing choice plus pivot payments, computed
// against any OutcomeSolver. A user's charge is what everyone else would
// gain if that user vanished: the others' best attainable welfare without
// them, minus the others' welfare under the chosen allocation.

namespace gridmech {

struct MechanismResult {
  Allocation allocation;       // users x slots, kW
  Eigen::VectorXd valuations;  // per user, currency
  Eigen::VectorXd payments;    // per user, currency
  Eigen::VectorXd utilities;   // valuation - payment, exactly
  double welfare = 0.0;        // all participants, currency
  std::vector<bool> pivotal;   // payment[i] > eps
};

struct RunOptions {
  double eps = 1e-9;  // feasibility slack and the pivotal-flag threshold
};

/// The allocation the mechanism picks (an empty matrix for zero users; no
/// solver is consulted then). Pre: valid scenario.
Allocation social_choice(const OutcomeSolver& solver, const Scenario& s);

/// Payment of user i under a pluggable rebate term:
///   p_i = rebate(s without i) - (others' welfare at the chosen allocation).
/// The rebate sees only the leave-one-out scenario, never user i's report.
/// Pre: valid scenario, 0 <= i < user_count.
double groves_payment(const OutcomeSolver& solver, const Scenario& s, Index i,
                      const std::function<double(const Scenario&)>& rebate);

/// Pivot payment: the rebate is the others' best attainable welfare without
/// user i, so p_i >= 0 and non-pivotal users pay nothing.
double clarke_payment(const OutcomeSolver& solver, const Scenario& s, Index i);

/// Full run for the scenario's mechanism: validates, solves once, prices
/// every user (pivot payments, except case 6's posted charge), and reports
/// per-user valuations, payments, utilities, and pivotal flags. The full
/// problem and each leave-one-out subproblem are solved exactly once.
/// Throws ValidationError on an invalid scenario and InfeasibleError when
/// case 4 has no feasible allocation.
MechanismResult run_mechanism(const Scenario& s, const RunOptions& options = {});

}  // namespace gridmech
