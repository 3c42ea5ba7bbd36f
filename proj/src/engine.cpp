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

#include <sstream>

#include "gridmech/engine.hpp"

#include "gridmech/errors.hpp"

namespace gridmech {

namespace {

// Welfare of everyone except user i under the chosen allocation. Subtracting
// the one valuation keeps case 1's synthetic supplier inside the total.
double others_welfare_at(const OutcomeSolver& solver, const Scenario& s,
                         const Allocation& a, Index i) {
  return solver.welfare(s, a) - solver.user_valuation(s, a, i);
}

}  // namespace

Allocation social_choice(const OutcomeSolver& solver, const Scenario& s) {
  if (s.user_count() == 0) {
    Allocation empty;
    empty.grants = Eigen::MatrixXd::Zero(0, s.slot_count());
    return empty;
  }
  return solver.solve(s);
}

double groves_payment(const OutcomeSolver& solver, const Scenario& s, Index i,
                      const std::function<double(const Scenario&)>& rebate) {
  const Allocation chosen = social_choice(solver, s);
  return rebate(remove_user(s, i)) - others_welfare_at(solver, s, chosen, i);
}

double clarke_payment(const OutcomeSolver& solver, const Scenario& s, Index i) {
  return groves_payment(solver, s, i, [&solver](const Scenario& sub) {
    return solver.welfare(sub, social_choice(solver, sub));
  });
}

MechanismResult run_mechanism(const Scenario& s, const RunOptions& options) {
  std::vector<Violation> violations = validate_scenario(s);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "scenario is invalid (" << violations.size() << " violation"
        << (violations.size() == 1 ? "" : "s") << "): "
        << violations.front().message;
    throw ValidationError(msg.str(), std::move(violations));
  }

  const Index n = s.user_count();
  MechanismResult result;
  if (n == 0) {
    result.allocation.grants = Eigen::MatrixXd::Zero(0, s.slot_count());
    result.valuations = Eigen::VectorXd::Zero(0);
    result.payments = Eigen::VectorXd::Zero(0);
    result.utilities = Eigen::VectorXd::Zero(0);
    result.welfare = 0.0;
    return result;
  }

  const OutcomeSolver& solver = outcome_solver_for(s.mechanism);
  result.allocation = solver.solve(s);
  result.valuations = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    result.valuations[i] = solver.user_valuation(s, result.allocation, i);
  }
  result.welfare = solver.welfare(s, result.allocation);

  result.payments = Eigen::VectorXd::Zero(n);
  if (s.mechanism == MechanismKind::kCase6) {
    for (Index i = 0; i < n; ++i) {
      result.payments[i] = case6_payment(s, result.allocation, i);
    }
  } else {
    const double full_welfare = result.welfare;
    for (Index i = 0; i < n; ++i) {
      const Scenario sub = remove_user(s, i);
      const double others_best = solver.welfare(sub, social_choice(solver, sub));
      const double others_at_chosen = full_welfare - result.valuations[i];
      result.payments[i] = others_best - others_at_chosen;
    }
  }

  result.utilities = result.valuations - result.payments;
  result.pivotal.resize(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    result.pivotal[static_cast<size_t>(i)] = result.payments[i] > options.eps;
  }
  return result;
}

}  // namespace gridmech
