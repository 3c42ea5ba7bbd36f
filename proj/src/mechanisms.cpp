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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridmech/errors.hpp"
#include "gridmech/mechanisms.hpp"
#include "gridmech/solvers.hpp"

namespace gridmech {

namespace {

// Ascending sum of declared demands in the single slot.
double total_demand(const Scenario& s) {
  double sum = 0.0;
  for (const UserProfile& user : s.users) sum += user.demand.values[0];
  return sum;
}

// Served value of `a` to user i: granted power counts only up to the
// declared demand, slot by slot, scaled to energy.
double capped_value(const Scenario& s, const Allocation& a, Index i) {
  const Eigen::VectorXd& x = s.users[static_cast<size_t>(i)].demand.values;
  const double dt = s.slot_hours();
  double value = 0.0;
  for (Index t = 0; t < a.slot_count(); ++t) {
    value += std::min(a.grants(i, t), x[t]) * dt;
  }
  return value;
}

// Sum of capped values over all users, in user order (so results that quote
// "welfare = sum of valuations" are bit-identical to that sum).
double capped_welfare(const Scenario& s, const Allocation& a) {
  double welfare = 0.0;
  for (Index i = 0; i < s.user_count(); ++i) welfare += capped_value(s, a, i);
  return welfare;
}

// ---------------------------------------------------------------------------
// Cases 4 and 6: welfare-optimal shifting as a linear program
// ---------------------------------------------------------------------------

// Variables: grants a_(i,t) laid out row-major, then served power u_(i,t)
// with u <= a and u <= x, so maximizing sum(u) maximizes the capped welfare.
// `floors` selects case 4 (granted energy per user >= demanded energy);
// otherwise case 6's ceilings apply (granted energy <= demanded energy).
//
// Welfare ties resolve by the smallest total dispatch, then by minimizing
// each grant in row-major order; every stage appends its optimum as an
// equality so the chain is deterministic.
Allocation solve_shift_lp(const Scenario& s, bool floors) {
  const Index n = s.user_count();
  const Index slots = s.slot_count();
  const Index cells = n * slots;
  const Index vars = 2 * cells;  // grants, then served
  const Eigen::MatrixXd x = demand_matrix(s);

  const auto grant_var = [slots](Index i, Index t) { return i * slots + t; };
  const auto served_var = [slots, cells](Index i, Index t) {
    return cells + i * slots + t;
  };

  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(vars);
  lp.objective.tail(cells).setOnes();

  for (Index i = 0; i < n; ++i) {
    for (Index t = 0; t < slots; ++t) {
      LinearConstraint served_cap;  // u_(i,t) <= x_(i,t)
      served_cap.coeffs = Eigen::VectorXd::Zero(vars);
      served_cap.coeffs[served_var(i, t)] = 1.0;
      served_cap.rel = Relation::kLe;
      served_cap.bound = x(i, t);
      lp.constraints.push_back(std::move(served_cap));

      LinearConstraint served_by_grant;  // u_(i,t) - a_(i,t) <= 0
      served_by_grant.coeffs = Eigen::VectorXd::Zero(vars);
      served_by_grant.coeffs[served_var(i, t)] = 1.0;
      served_by_grant.coeffs[grant_var(i, t)] = -1.0;
      served_by_grant.rel = Relation::kLe;
      served_by_grant.bound = 0.0;
      lp.constraints.push_back(std::move(served_by_grant));
    }
  }

  for (Index t = 0; t < slots; ++t) {
    LinearConstraint capacity;  // sum_i a_(i,t) <= production(t)
    capacity.coeffs = Eigen::VectorXd::Zero(vars);
    for (Index i = 0; i < n; ++i) capacity.coeffs[grant_var(i, t)] = 1.0;
    capacity.rel = Relation::kLe;
    capacity.bound = s.production.values[t];
    lp.constraints.push_back(std::move(capacity));
  }

  // Uniform slots let the energy comparison cancel the slot duration.
  for (Index i = 0; i < n; ++i) {
    LinearConstraint energy;  // sum_t a_(i,t) >=/<= sum_t x_(i,t)
    energy.coeffs = Eigen::VectorXd::Zero(vars);
    for (Index t = 0; t < slots; ++t) energy.coeffs[grant_var(i, t)] = 1.0;
    energy.rel = floors ? Relation::kGe : Relation::kLe;
    energy.bound = x.row(i).sum();
    lp.constraints.push_back(std::move(energy));
  }

  LpSolution best = lp_solve(lp);
  if (best.status == LpStatus::kInfeasible) {
    throw InfeasibleError(
        "total demanded energy exceeds what production admits");
  }
  if (best.status != LpStatus::kOptimal) {
    throw std::runtime_error("shift program was not solvable");
  }

  const auto fix_value = [&lp](const Eigen::VectorXd& coeffs, double value) {
    LinearConstraint fixed;
    fixed.coeffs = coeffs;
    fixed.rel = Relation::kEq;
    fixed.bound = value;
    lp.constraints.push_back(std::move(fixed));
  };

  // Stage 2: pin the welfare, minimize the dispatched power.
  Eigen::VectorXd welfare_row = Eigen::VectorXd::Zero(vars);
  welfare_row.tail(cells).setOnes();
  fix_value(welfare_row, best.value);
  lp.objective.setZero();
  lp.objective.head(cells).setConstant(-1.0);
  best = lp_solve(lp);
  if (best.status != LpStatus::kOptimal) {
    throw std::runtime_error("dispatch tie-break stage failed");
  }

  Eigen::VectorXd dispatch_row = Eigen::VectorXd::Zero(vars);
  dispatch_row.head(cells).setOnes();
  fix_value(dispatch_row, -best.value);

  // Stage 3: minimize each grant in row-major order, freezing as we go.
  Allocation result;
  result.grants = Eigen::MatrixXd::Zero(n, slots);
  for (Index i = 0; i < n; ++i) {
    for (Index t = 0; t < slots; ++t) {
      lp.objective.setZero();
      lp.objective[grant_var(i, t)] = -1.0;
      best = lp_solve(lp);
      if (best.status != LpStatus::kOptimal) {
        throw std::runtime_error("lexicographic tie-break stage failed");
      }
      const double g = std::max(0.0, best.x[grant_var(i, t)]);
      result.grants(i, t) = g;
      Eigen::VectorXd row = Eigen::VectorXd::Zero(vars);
      row[grant_var(i, t)] = 1.0;
      fix_value(row, g);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Solver singletons
// ---------------------------------------------------------------------------

// Welfare bookkeeping for case 1 counts a synthetic supplier worth the slot's
// production whenever service is on; users enter at the negative of their
// declared demand (service is a cost they cause). The supplier also shows up
// in the welfare of an empty sub-scenario: service to nobody is trivially on,
// so a lone user's removal leaves the supplier's production on the table and
// pivot payments stay nonnegative.
class Case1Solver final : public OutcomeSolver {
 public:
  Allocation solve(const Scenario& s) const override { return case1_solve(s); }

  double welfare(const Scenario& s, const Allocation&) const override {
    if (!case1_accepts(s)) return 0.0;
    const double dt = s.slot_hours();
    double users = 0.0;
    for (Index i = 0; i < s.user_count(); ++i) {
      users += s.users[static_cast<size_t>(i)].demand.values[0] * dt;
    }
    return s.production.values[0] * dt - users;
  }

  double user_valuation(const Scenario& s, const Allocation&,
                        Index i) const override {
    if (!case1_accepts(s)) return 0.0;
    return -s.users[static_cast<size_t>(i)].demand.values[0] * s.slot_hours();
  }
};

class Case2Solver final : public OutcomeSolver {
 public:
  Allocation solve(const Scenario& s) const override { return case2_solve(s); }

  double welfare(const Scenario& s, const Allocation& a) const override {
    return capped_welfare(s, a);
  }

  double user_valuation(const Scenario& s, const Allocation& a,
                        Index i) const override {
    return capped_value(s, a, i);
  }
};

class Case3Solver final : public OutcomeSolver {
 public:
  Allocation solve(const Scenario& s) const override { return case3_solve(s); }

  double welfare(const Scenario& s, const Allocation& a) const override {
    return capped_welfare(s, a);
  }

  double user_valuation(const Scenario& s, const Allocation& a,
                        Index i) const override {
    return capped_value(s, a, i);
  }
};

class Case4Solver final : public OutcomeSolver {
 public:
  Allocation solve(const Scenario& s) const override { return case4_solve(s); }

  double welfare(const Scenario& s, const Allocation& a) const override {
    return capped_welfare(s, a);
  }

  double user_valuation(const Scenario& s, const Allocation& a,
                        Index i) const override {
    return capped_value(s, a, i);
  }
};

class Case5Solver final : public OutcomeSolver {
 public:
  Allocation solve(const Scenario& s) const override {
    return case5_allocate(s);
  }

  double welfare(const Scenario& s, const Allocation& a) const override {
    return capped_welfare(s, a);
  }

  double user_valuation(const Scenario& s, const Allocation& a,
                        Index i) const override {
    return capped_value(s, a, i);
  }
};

class Case6Solver final : public OutcomeSolver {
 public:
  Allocation solve(const Scenario& s) const override { return case6_solve(s); }

  double welfare(const Scenario& s, const Allocation& a) const override {
    return capped_welfare(s, a);
  }

  double user_valuation(const Scenario& s, const Allocation& a,
                        Index i) const override {
    return capped_value(s, a, i);
  }
};

}  // namespace

const OutcomeSolver& outcome_solver_for(MechanismKind kind) {
  static const Case1Solver case1;
  static const Case2Solver case2;
  static const Case3Solver case3;
  static const Case4Solver case4;
  static const Case5Solver case5;
  static const Case6Solver case6;
  switch (kind) {
    case MechanismKind::kCase1: return case1;
    case MechanismKind::kCase2: return case2;
    case MechanismKind::kCase3: return case3;
    case MechanismKind::kCase4: return case4;
    case MechanismKind::kCase5: return case5;
    case MechanismKind::kCase6: return case6;
  }
  throw std::invalid_argument("unknown mechanism kind");
}

bool case1_accepts(const Scenario& s) {
  // Service stays on when production covers the aggregate demand; the exact
  // boundary counts as covered.
  return total_demand(s) <= s.production.values[0];
}

Allocation case1_solve(const Scenario& s) {
  const Index n = s.user_count();
  Allocation a;
  a.grants = Eigen::MatrixXd::Zero(n, 1);
  if (case1_accepts(s)) {
    for (Index i = 0; i < n; ++i) {
      a.grants(i, 0) = s.users[static_cast<size_t>(i)].demand.values[0];
    }
  }
  return a;
}

Allocation case2_solve(const Scenario& s) {
  const Index n = s.user_count();
  Eigen::VectorXd weights(n);
  for (Index i = 0; i < n; ++i) {
    weights[i] = s.users[static_cast<size_t>(i)].demand.values[0];
  }
  const SubsetSumResult chosen =
      subset_sum_max(weights, s.production.values[0]);

  Allocation a;
  a.grants = Eigen::MatrixXd::Zero(n, 1);
  for (Index i : chosen.chosen) a.grants(i, 0) = weights[i];
  return a;
}

Allocation case3_solve(const Scenario& s) {
  const Index n = s.user_count();
  Eigen::VectorXd demands(n);
  for (Index i = 0; i < n; ++i) {
    demands[i] = s.users[static_cast<size_t>(i)].demand.values[0];
  }
  Allocation a;
  a.grants = proportional_ration(demands, s.production.values[0]);
  return a;
}

Allocation case4_solve(const Scenario& s) { return solve_shift_lp(s, true); }

Allocation case5_allocate(const Scenario& s) {
  const Index n = s.user_count();
  const Index slots = s.slot_count();
  const Eigen::MatrixXd x = demand_matrix(s);
  Allocation a;
  a.grants = Eigen::MatrixXd::Zero(n, slots);
  for (Index t = 0; t < slots; ++t) {
    a.grants.col(t) = proportional_ration(x.col(t), s.production.values[t]);
  }
  return a;
}

Allocation case6_solve(const Scenario& s) { return solve_shift_lp(s, false); }

double case6_payment(const Scenario& s, const Allocation& a, Index i) {
  const double dt = s.slot_hours();
  const double c = s.params.c;
  const double k = s.params.k;
  double payment = 0.0;
  for (Index t = 0; t < a.slot_count(); ++t) {
    double column = 0.0;
    for (Index j = 0; j < a.user_count(); ++j) column += a.grants(j, t);
    const double overshoot =
        std::max(0.0, column - c * s.production.values[t]);
    payment += (a.grants(i, t) + k * overshoot) * dt;
  }
  return payment;
}

}  // namespace gridmech
