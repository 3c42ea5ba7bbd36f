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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gridmech/solvers.hpp"

// Two-phase tableau simplex. Bland's rule (lowest eligible index enters,
// lowest-index basic variable leaves on ratio ties) makes the pivot sequence
// deterministic and cycle-free; the price is speed we do not need at this
// problem size. Phase 1 drives artificial variables out of the basis, phase 2
// optimizes the real objective with artificial columns barred from entering.

namespace gridmech {

namespace {

constexpr double kPivotTol = 1e-9;

struct Tableau {
  Eigen::MatrixXd rows;         // m x (cols + 1), last column is the rhs
  std::vector<Index> basis;     // basic variable of each row
  std::vector<bool> barred;     // columns that may never enter again
  Index cols = 0;               // variable columns (excludes the rhs)

  double& at(Index r, Index c) { return rows(r, c); }
  double rhs(Index r) const { return rows(r, cols); }
};

void pivot(Tableau& t, Eigen::RowVectorXd& z, Index row, Index col) {
  t.rows.row(row) /= t.rows(row, col);
  for (Index r = 0; r < t.rows.rows(); ++r) {
    if (r == row) continue;
    const double factor = t.rows(r, col);
    if (factor != 0.0) t.rows.row(r) -= factor * t.rows.row(row);
  }
  const double zfactor = z[col];
  if (zfactor != 0.0) z -= zfactor * t.rows.row(row);
  t.basis[static_cast<size_t>(row)] = col;
}

// Reduced-cost row for maximizing cost . x over the current basis:
// z[j] = cost[basis] . column(j) - cost[j]; the rhs slot holds the objective.
Eigen::RowVectorXd price_out(const Tableau& t, const Eigen::VectorXd& cost) {
  Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(t.cols + 1);
  for (Index r = 0; r < t.rows.rows(); ++r) {
    const double c = cost[t.basis[static_cast<size_t>(r)]];
    if (c != 0.0) z += c * t.rows.row(r);
  }
  for (Index j = 0; j < t.cols; ++j) z[j] -= cost[j];
  return z;
}

// Bland iterations until no column improves. Returns false when some column
// improves without a blocking row (unbounded objective).
bool optimize(Tableau& t, Eigen::RowVectorXd& z) {
  const Index m = t.rows.rows();
  const long max_iterations = 4000 + 400L * (m + t.cols);
  for (long iter = 0; iter < max_iterations; ++iter) {
    Index entering = -1;
    for (Index j = 0; j < t.cols; ++j) {
      if (!t.barred[static_cast<size_t>(j)] && z[j] < -kPivotTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return true;

    Index leaving = -1;
    double best_ratio = 0.0;
    for (Index r = 0; r < m; ++r) {
      const double coeff = t.rows(r, entering);
      if (coeff <= kPivotTol) continue;
      const double ratio = t.rhs(r) / coeff;
      if (leaving < 0 || ratio < best_ratio - kPivotTol ||
          (std::abs(ratio - best_ratio) <= kPivotTol &&
           t.basis[static_cast<size_t>(r)] <
               t.basis[static_cast<size_t>(leaving)])) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    if (leaving < 0) return false;
    pivot(t, z, leaving, entering);
  }
  throw std::runtime_error("simplex exceeded its iteration limit");
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  const Index n = lp.objective.size();
  const Index m = static_cast<Index>(lp.constraints.size());
  for (const LinearConstraint& c : lp.constraints) {
    if (c.coeffs.size() != n) {
      throw std::invalid_argument("constraint arity differs from variable count");
    }
  }
  const bool shifted = lp.lower_bounds.size() > 0;
  if (shifted && lp.lower_bounds.size() != n) {
    throw std::invalid_argument("lower_bounds arity differs from variable count");
  }

  // Work in y = x - lower_bounds >= 0; bounds move into the rhs.
  Eigen::VectorXd lb = shifted ? lp.lower_bounds : Eigen::VectorXd::Zero(n);

  Index n_slack = 0, n_artificial = 0;
  for (const LinearConstraint& c : lp.constraints) {
    double b = c.bound - c.coeffs.dot(lb);
    Relation rel = c.rel;
    if (b < 0.0) rel = (rel == Relation::kLe)   ? Relation::kGe
                       : (rel == Relation::kGe) ? Relation::kLe
                                                : Relation::kEq;
    if (rel != Relation::kEq) ++n_slack;
    if (rel != Relation::kLe) ++n_artificial;
  }

  Tableau t;
  t.cols = n + n_slack + n_artificial;
  t.rows = Eigen::MatrixXd::Zero(m, t.cols + 1);
  t.basis.assign(static_cast<size_t>(m), -1);
  t.barred.assign(static_cast<size_t>(t.cols), false);

  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(t.cols);
  Index slack_col = n;
  Index artificial_col = n + n_slack;
  double rhs_scale = 1.0;
  for (Index r = 0; r < m; ++r) {
    const LinearConstraint& c = lp.constraints[static_cast<size_t>(r)];
    double b = c.bound - c.coeffs.dot(lb);
    double sign = 1.0;
    Relation rel = c.rel;
    if (b < 0.0) {  // normalize to a nonnegative rhs
      sign = -1.0;
      b = -b;
      rel = (rel == Relation::kLe)   ? Relation::kGe
            : (rel == Relation::kGe) ? Relation::kLe
                                     : Relation::kEq;
    }
    t.rows.block(r, 0, 1, n) = sign * c.coeffs.transpose();
    t.rows(r, t.cols) = b;
    rhs_scale = std::max(rhs_scale, b);

    if (rel == Relation::kLe) {
      t.at(r, slack_col) = 1.0;
      t.basis[static_cast<size_t>(r)] = slack_col++;
    } else {
      if (rel == Relation::kGe) t.at(r, slack_col++) = -1.0;
      t.at(r, artificial_col) = 1.0;
      phase1_cost[artificial_col] = -1.0;
      t.basis[static_cast<size_t>(r)] = artificial_col++;
    }
  }

  LpSolution solution;

  if (n_artificial > 0) {
    Eigen::RowVectorXd z = price_out(t, phase1_cost);
    if (!optimize(t, z)) {  // bounded above by 0, cannot be unbounded
      throw std::runtime_error("phase 1 reported unbounded; numerical trouble");
    }
    if (z[t.cols] < -1e-9 * rhs_scale) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Pivot leftover artificials out on any real column; an all-zero row is
    // a redundant constraint and its artificial can stay barred at level 0.
    for (Index r = 0; r < m; ++r) {
      const Index b = t.basis[static_cast<size_t>(r)];
      if (b < n + n_slack) continue;
      for (Index j = 0; j < n + n_slack; ++j) {
        if (std::abs(t.rows(r, j)) > 1e-7) {
          pivot(t, z, r, j);
          break;
        }
      }
    }
    for (Index j = n + n_slack; j < t.cols; ++j) {
      t.barred[static_cast<size_t>(j)] = true;
    }
  }

  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(t.cols);
  phase2_cost.head(n) = lp.objective;
  Eigen::RowVectorXd z = price_out(t, phase2_cost);
  if (!optimize(t, z)) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(t.cols);
  for (Index r = 0; r < m; ++r) {
    y[t.basis[static_cast<size_t>(r)]] = t.rhs(r);
  }
  solution.status = LpStatus::kOptimal;
  solution.x = y.head(n) + lb;
  solution.value = lp.objective.dot(solution.x);
  return solution;
}

}  // namespace gridmech
