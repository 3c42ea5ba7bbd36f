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

#include "gridmech/allocation.hpp"
#include "gridmech/scenario.hpp"

// The six allocation rules. Each one answers three questions the payment
// engine asks: what is the chosen allocation, what is an allocation worth in
// total, and what is it worth to one user. Welfare and valuations are in
// currency (energy-valued: kW sums scaled by the slot duration).

namespace gridmech {

/// Outcome semantics of one mechanism.
///
/// welfare() covers every participant, which for case 1 includes a synthetic
/// supplier valued at production when service is on; that supplier never
/// appears in per-user rows. For all other cases welfare is exactly the sum
/// of user_valuation over all users (same summation order, so bit-equal).
class OutcomeSolver {
 public:
  virtual ~OutcomeSolver() = default;

  /// The allocation this mechanism picks for `s`. Throws InfeasibleError when
  /// no allocation satisfies the constraints (case 4 only).
  virtual Allocation solve(const Scenario& s) const = 0;

  /// Total value of `a` across every participant, in currency.
  virtual double welfare(const Scenario& s, const Allocation& a) const = 0;

  /// Value of `a` to user i, in currency.
  virtual double user_valuation(const Scenario& s, const Allocation& a,
                                Index i) const = 0;
};

/// The solver for a given kind (a stateless singleton).
const OutcomeSolver& outcome_solver_for(MechanismKind kind);

/// Case 1 serves everybody at their declared demand, or nobody: on iff the
/// single slot's production covers the aggregate demand (ties switch on).
bool case1_accepts(const Scenario& s);
Allocation case1_solve(const Scenario& s);

/// Case 2 picks the subset of users with the highest total demand that fits
/// under production, granting members their full demand. Ties prefer the
/// lexicographically smallest ascending index set.
Allocation case2_solve(const Scenario& s);

/// Case 3 fills divisible demands: everything when it fits, otherwise each
/// user gets their proportional share of production (full utilization).
Allocation case3_solve(const Scenario& s);

/// Case 4 shifts load across slots: per-slot capacity holds and every user
/// receives at least their demanded energy over the horizon (value accrues
/// only up to the demanded power per slot, so forced surplus is worthless).
/// Ties resolve by smallest total dispatch, then by the row-major
/// lexicographically smallest grant matrix. Throws InfeasibleError when the
/// energy floors exceed what production admits.
Allocation case4_solve(const Scenario& s);

/// Case 5 applies a fixed rule per slot: demands when they fit, otherwise
/// proportional shares of production.
Allocation case5_allocate(const Scenario& s);

/// Case 6 caps each user at their demanded energy over the horizon and
/// maximizes served value under per-slot capacity; same tie-breaks as case 4.
Allocation case6_solve(const Scenario& s);

/// Case 6 charges granted energy plus a congestion term: in each slot the
/// aggregate grant beyond fraction c of production is priced at slope k and
/// added to every user's rate. p_i = sum_t (a_i(t) + k * y(t)) * slot_hours,
/// y(t) = max(0, sum_j a_j(t) - c * production(t)).
double case6_payment(const Scenario& s, const Allocation& a, Index i);

}  // namespace gridmech
