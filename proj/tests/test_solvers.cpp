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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest/doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gridmech/solvers.hpp"

#include "test_support.hpp"

using namespace gridmech;
using gridmech::test::vec;

TEST_CASE("subset sum picks the best fitting load set") {
  const SubsetSumResult r = subset_sum_max(vec({5.0, 4.0, 3.0}), 7.0);
  CHECK(r.total == 7.0);
  REQUIRE(r.chosen.size() == 2);
  CHECK(r.chosen[0] == 1);
  CHECK(r.chosen[1] == 2);
}

TEST_CASE("subset ties go to the lexicographically smallest index set") {
  // Both {0} and {1} reach 5; index 0 wins.
  const SubsetSumResult r = subset_sum_max(vec({5.0, 5.0}), 5.0);
  CHECK(r.total == 5.0);
  REQUIRE(r.chosen.size() == 1);
  CHECK(r.chosen[0] == 0);

  // {0,1} and {1} tie at 3; the sequence [0,1] precedes [1].
  const SubsetSumResult zero_lead = subset_sum_max(vec({0.0, 3.0}), 3.0);
  REQUIRE(zero_lead.chosen.size() == 2);
  CHECK(zero_lead.chosen[0] == 0);
  CHECK(zero_lead.chosen[1] == 1);

  // A zero-weight tail is never padded on: [0] precedes [0,1].
  const SubsetSumResult zero_tail = subset_sum_max(vec({3.0, 0.0}), 3.0);
  REQUIRE(zero_tail.chosen.size() == 1);
  CHECK(zero_tail.chosen[0] == 0);
}

TEST_CASE("subset sum degenerate inputs") {
  CHECK(subset_sum_max(Eigen::VectorXd(0), 5.0).chosen.empty());
  CHECK(subset_sum_max(vec({3.0, 2.0}), 0.0).chosen.empty());
  CHECK(subset_sum_max(vec({0.0, 0.0}), 5.0).chosen.empty());

  // Everything fits: take everything.
  const SubsetSumResult all = subset_sum_max(vec({1.0, 2.0, 3.0}), 10.0);
  CHECK(all.total == 6.0);
  CHECK(all.chosen == std::vector<Index>({0, 1, 2}));
}

TEST_CASE("exhaustive and table-driven paths agree") {
  std::mt19937_64 gen(7);
  for (int round = 0; round < 50; ++round) {
    const Index n = 12;
    Eigen::VectorXd weights(n);
    for (Index i = 0; i < n; ++i) {
      // 3-decimal weights in [0, 8], the generator's native shape.
      const double raw =
          static_cast<double>(gen() >> 11) * 0x1.0p-53 * 8.0;
      weights[i] = std::round(raw * 1000.0) / 1000.0;
    }
    const double capacity = 0.6 * weights.sum();
    const SubsetSumResult a = subset_sum_max_exhaustive(weights, capacity);
    const SubsetSumResult b = subset_sum_max_scaled(weights, capacity);
    CHECK(a.total == doctest::Approx(b.total).epsilon(1e-12));
    CHECK(a.chosen == b.chosen);
  }
}

TEST_CASE("large instances route through the scaled table") {
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(22);
  const SubsetSumResult r = subset_sum_max(weights, 7.5);
  CHECK(r.total == 7.0);
  REQUIRE(r.chosen.size() == 7);
  for (Index i = 0; i < 7; ++i) CHECK(r.chosen[static_cast<size_t>(i)] == i);
}

TEST_CASE("proportional rationing splits scarce supply by demand share") {
  const Eigen::VectorXd even = proportional_ration(vec({4.0, 4.0}), 6.0);
  CHECK(even[0] == doctest::Approx(3.0));
  CHECK(even[1] == doctest::Approx(3.0));

  const Eigen::VectorXd skewed = proportional_ration(vec({4.0, 8.0}), 6.0);
  CHECK(skewed[0] == doctest::Approx(2.0));
  CHECK(skewed[1] == doctest::Approx(4.0));
}

TEST_CASE("rationing under capacity returns the demands unchanged") {
  const Eigen::VectorXd demands = vec({1.2345678901234567, 2.5});
  const Eigen::VectorXd granted = proportional_ration(demands, 10.0);
  CHECK(granted[0] == demands[0]);
  CHECK(granted[1] == demands[1]);
}

TEST_CASE("rationed grants sum to the capacity exactly") {
  const Eigen::VectorXd granted =
      proportional_ration(vec({0.1, 0.2, 0.3}), 0.45);
  CHECK(granted.sum() == 0.45);
  // Zero demands stay zero even as the residue is absorbed.
  const Eigen::VectorXd with_zero =
      proportional_ration(vec({0.1, 0.0, 0.3}), 0.25);
  CHECK(with_zero[1] == 0.0);
  CHECK(with_zero.sum() == 0.25);
}

TEST_CASE("rationing is scale equivariant") {
  const Eigen::VectorXd demands = vec({1.7, 2.9, 0.4});
  const double lambda = 3.25;
  const Eigen::VectorXd base = proportional_ration(demands, 2.0);
  const Eigen::VectorXd scaled =
      proportional_ration(lambda * demands, lambda * 2.0);
  for (Index i = 0; i < demands.size(); ++i) {
    CHECK(scaled[i] == doctest::Approx(lambda * base[i]).epsilon(1e-12));
  }
}

namespace {

LinearConstraint le(std::vector<double> coeffs, double bound) {
  return {vec(std::move(coeffs)), Relation::kLe, bound};
}

LinearConstraint ge(std::vector<double> coeffs, double bound) {
  return {vec(std::move(coeffs)), Relation::kGe, bound};
}

LinearConstraint eq(std::vector<double> coeffs, double bound) {
  return {vec(std::move(coeffs)), Relation::kEq, bound};
}

}  // namespace

TEST_CASE("lp maximizes a bounded single variable") {
  LinearProgram lp;
  lp.objective = vec({1.0});
  lp.constraints.push_back(le({1.0}, 5.0));
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(5.0));
  CHECK(sol.value == doctest::Approx(5.0));
}

TEST_CASE("lp mixes all three relation kinds") {
  // max x + y with x <= 3, y <= 4, x + y >= 6.
  LinearProgram lp;
  lp.objective = vec({1.0, 1.0});
  lp.constraints.push_back(le({1.0, 0.0}, 3.0));
  lp.constraints.push_back(le({0.0, 1.0}, 4.0));
  lp.constraints.push_back(ge({1.0, 1.0}, 6.0));
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.value == doctest::Approx(7.0));

  lp.constraints.push_back(eq({1.0, 0.0}, 2.5));
  const LpSolution pinned = lp_solve(lp);
  REQUIRE(pinned.status == LpStatus::kOptimal);
  CHECK(pinned.x[0] == doctest::Approx(2.5));
  CHECK(pinned.value == doctest::Approx(6.5));
}

TEST_CASE("lp reports infeasibility") {
  // x >= 6 cannot meet x <= 5.
  LinearProgram lp;
  lp.objective = vec({1.0});
  lp.constraints.push_back(le({1.0}, 5.0));
  lp.constraints.push_back(ge({1.0}, 6.0));
  CHECK(lp_solve(lp).status == LpStatus::kInfeasible);
}

TEST_CASE("lp reports an unbounded ray") {
  LinearProgram lp;
  lp.objective = vec({1.0, 0.0});
  lp.constraints.push_back(le({0.0, 1.0}, 1.0));
  CHECK(lp_solve(lp).status == LpStatus::kUnbounded);
}

TEST_CASE("lp honors lower bounds") {
  // min x (written as max -x) with x >= 2.
  LinearProgram lp;
  lp.objective = vec({-1.0});
  lp.constraints.push_back(le({1.0}, 9.0));
  lp.lower_bounds = vec({2.0});
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(2.0));
  CHECK(sol.value == doctest::Approx(-2.0));
}

TEST_CASE("lp solves a degenerate transportation-style program") {
  // Two users, two slots, serve variables capped by demand and grants:
  // the shape the demand-shifting mechanism builds.
  LinearProgram lp;
  lp.objective = vec({0.0, 0.0, 1.0, 1.0});  // serve variables only
  lp.constraints.push_back(le({1.0, 1.0, 0.0, 0.0}, 4.0));   // capacity
  lp.constraints.push_back(le({0.0, 0.0, 1.0, 0.0}, 3.0));   // u0 <= x0
  lp.constraints.push_back(le({0.0, 0.0, 0.0, 1.0}, 2.0));   // u1 <= x1
  lp.constraints.push_back(le({-1.0, 0.0, 1.0, 0.0}, 0.0));  // u0 <= a0
  lp.constraints.push_back(le({0.0, -1.0, 0.0, 1.0}, 0.0));  // u1 <= a1
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.value == doctest::Approx(4.0));
}
