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

#include <vector>

#include <Eigen/Dense>

// Deterministic numeric kernels shared by the mechanisms. All three solvers
// are pure functions: same input, same output, bit for bit.

namespace gridmech {

using Eigen::Index;

// ---------------------------------------------------------------------------
// Best-value subset under a capacity
// ---------------------------------------------------------------------------

struct SubsetSumResult {
  std::vector<Index> chosen;  // ascending indices into the weight vector
  double total = 0.0;         // sum of the chosen true weights
};

/// Maximum-total subset of `weights` (item value equals item weight) whose
/// total stays within `capacity` (+1e-9 slack, so an exact fit is accepted).
/// Among subsets whose totals tie within 1e-9 of the optimum, the one whose
/// ascending index sequence is lexicographically smallest wins.
///
/// Exhaustive for up to 20 items; larger inputs switch to a scaled dynamic
/// program at 1e-3 kW resolution whose chosen set is always capacity-feasible
/// with the true weights (per-item weights round up, capacity rounds down)
/// but whose total is optimal only with respect to the rounded weights.
///
/// Pre: weights finite and >= 0, capacity finite and >= 0.
SubsetSumResult subset_sum_max(const Eigen::Ref<const Eigen::VectorXd>& weights,
                               double capacity);

/// The exhaustive path, exposed for cross-checking. Pre: size <= 25.
SubsetSumResult subset_sum_max_exhaustive(
    const Eigen::Ref<const Eigen::VectorXd>& weights, double capacity);

/// The scaled dynamic-programming path, exposed for cross-checking.
SubsetSumResult subset_sum_max_scaled(
    const Eigen::Ref<const Eigen::VectorXd>& weights, double capacity);

// ---------------------------------------------------------------------------
// Dense linear programming
// ---------------------------------------------------------------------------

enum class Relation { kLe, kGe, kEq };

struct LinearConstraint {
  Eigen::VectorXd coeffs;  // one coefficient per variable
  Relation rel = Relation::kLe;
  double bound = 0.0;
};

/// maximize objective . x  subject to the constraints and x >= lower_bounds
/// (an empty lower_bounds vector means all zeros).
struct LinearProgram {
  Eigen::VectorXd objective;
  std::vector<LinearConstraint> constraints;
  Eigen::VectorXd lower_bounds;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;   // a vertex optimum when status == kOptimal
  double value = 0.0;  // objective at x
};

/// Two-phase dense tableau simplex with Bland's rule, so the pivot sequence
/// (and hence the returned vertex) is deterministic and cycling cannot occur.
/// Feasibility is accepted within 1e-9; re-solving a solved program with its
/// optimal value appended as an equality constraint therefore stays feasible.
///
/// Pre: every coefficient vector matches the variable count; bounds finite.
LpSolution lp_solve(const LinearProgram& lp);

// ---------------------------------------------------------------------------
// Proportional rationing
// ---------------------------------------------------------------------------

/// Splits `capacity` across `demands`: the demands themselves when they fit
/// (sum <= capacity), otherwise each demand scaled by capacity/sum so the
/// result sums to capacity exactly (the last positive entry absorbs the
/// floating-point residue). Zero demands always receive zero.
///
/// Pre: demands finite and >= 0, capacity finite and >= 0.
Eigen::VectorXd proportional_ration(
    const Eigen::Ref<const Eigen::VectorXd>& demands, double capacity);

}  // namespace gridmech
