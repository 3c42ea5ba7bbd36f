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

#include "gridmech/errors.hpp"
#include "gridmech/oracle.hpp"
#include "gridmech/scenario_io.hpp"

#include "test_support.hpp"

using namespace gridmech;
using gridmech::test::make_scenario;

TEST_CASE("oracle reproduces both case-1 outcomes bit for bit") {
  const Scenario off = make_scenario(MechanismKind::kCase1, {10.0},
                                     {{6.0}, {5.0}});
  const OracleOutcome denied = brute_force_outcome(off);
  CHECK(denied.welfare == run_mechanism(off).welfare);
  CHECK(denied.allocation.grants.isZero(0.0));

  const Scenario on = make_scenario(MechanismKind::kCase1, {10.0},
                                    {{3.0}, {4.0}});
  const OracleOutcome served = brute_force_outcome(on);
  CHECK(served.welfare == run_mechanism(on).welfare);
  CHECK(served.allocation.grants(0, 0) == 3.0);
}

TEST_CASE("oracle agrees exactly with the subset mechanism") {
  GenerateOptions gen;
  gen.mechanism = MechanismKind::kCase2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    gen.seed = seed;
    gen.users = 2 + static_cast<Index>(seed % 9);
    const Scenario s = generate_scenario(gen);
    const MechanismResult engine = run_mechanism(s);
    const OracleOutcome oracle = brute_force_outcome(s);
    CHECK(engine.welfare == oracle.welfare);
    CHECK((engine.allocation.grants.array() == oracle.allocation.grants.array())
              .all());
  }
}

TEST_CASE("grid oracle brackets the divisible mechanisms") {
  OracleOptions opts;
  GenerateOptions gen;
  gen.users = 3;
  for (MechanismKind kind :
       {MechanismKind::kCase3, MechanismKind::kCase6}) {
    gen.mechanism = kind;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      gen.seed = seed;
      const Scenario s = generate_scenario(gen);
      const double gap = std::abs(run_mechanism(s).welfare -
                                  brute_force_outcome(s, opts).welfare);
      CHECK(gap <= oracle_welfare_tolerance(s, opts.resolution));
    }
  }
}

TEST_CASE("grid oracle finds the worked shifting optimum") {
  const Scenario s = make_scenario(MechanismKind::kCase4, {4.0, 4.0},
                                   {{3.0, 0.0}, {3.0, 2.0}});
  const OracleOutcome oracle = brute_force_outcome(s);
  // Demands and caps sit on the 0.5-kW grid, so the search lands exactly.
  CHECK(oracle.welfare == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("oracle budget and feasibility failures are loud") {
  Scenario big = make_scenario(MechanismKind::kCase2, {7.0}, {});
  for (int i = 0; i < 26; ++i) {
    UserProfile user;
    user.id = "u" + std::to_string(i);
    user.demand.slot_hours = 1.0;
    user.demand.values = Eigen::VectorXd::Constant(1, 1.0);
    big.users.push_back(std::move(user));
  }
  CHECK_THROWS_AS(brute_force_outcome(big), BudgetExceededError);

  const Scenario wide = make_scenario(MechanismKind::kCase3, {6.0},
                                      {{4.0}, {4.0}, {4.0}});
  OracleOptions tiny;
  tiny.budget = 2.0;
  CHECK_THROWS_AS(brute_force_outcome(wide, tiny), BudgetExceededError);

  // Energy floors that no grid point can meet.
  const Scenario starved = make_scenario(MechanismKind::kCase4, {4.0},
                                         {{3.0}, {3.0}});
  CHECK_THROWS_AS(brute_force_outcome(starved), InfeasibleError);
}

TEST_CASE("oracle tolerance is zero only for the exact cases") {
  const Scenario discrete = make_scenario(MechanismKind::kCase2, {7.0},
                                          {{5.0}, {4.0}});
  CHECK(oracle_welfare_tolerance(discrete, 0.5) == 0.0);

  const Scenario divisible = make_scenario(MechanismKind::kCase3, {6.0},
                                           {{4.0}, {4.0}});
  CHECK(oracle_welfare_tolerance(divisible, 0.5) == 1.0);

  const Scenario wide = make_scenario(MechanismKind::kCase4, {4.0, 4.0},
                                      {{3.0, 0.0}, {3.0, 2.0}});
  CHECK(oracle_welfare_tolerance(wide, 0.5) == 2.0);
}

TEST_CASE("closed-form rationing payments match the engine") {
  GenerateOptions gen;
  gen.mechanism = MechanismKind::kCase3;
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    gen.seed = seed;
    gen.users = 2 + static_cast<Index>(seed % 6);
    gen.policy = seed % 2 == 0 ? ProductionPolicy::kTight
                               : ProductionPolicy::kLoose;
    const Scenario s = generate_scenario(gen);
    const MechanismResult r = run_mechanism(s);
    for (Index i = 0; i < s.user_count(); ++i) {
      const double formula = case3_payment_formula(s, r.allocation, i);
      CHECK(std::abs(r.payments[i] - formula) <= 1e-9);
    }
  }
}

TEST_CASE("misreport sweep keeps the truthful sample bit-identical") {
  const Scenario s = make_scenario(MechanismKind::kCase3, {6.0},
                                   {{4.0}, {4.0}});
  const MisreportSweep sweep = misreport_sweep(s, 0);
  CHECK(sweep.truthful_utility == doctest::Approx(2.0));
  REQUIRE(sweep.samples.size() == default_misreport_factors().size());
  bool saw_truth = false;
  for (const MisreportSample& sample : sweep.samples) {
    if (sample.factor == 1.0) {
      saw_truth = true;
      CHECK(sample.utility == sweep.truthful_utility);
    }
  }
  CHECK(saw_truth);
  CHECK(sweep.worst_margin() >= -1e-9);
}

TEST_CASE("case-1 utility conventions disagree about lying") {
  const Scenario s = make_scenario(MechanismKind::kCase1, {10.0},
                                   {{6.0}, {5.0}});

  SweepOptions capped;  // default model
  const MisreportSweep greedy = misreport_sweep(s, 0, capped);
  // Reporting zero flips the gate on, escapes the charge, and beats truth.
  CHECK(greedy.worst_margin() == doctest::Approx(-5.0));

  SweepOptions honest;
  honest.case1_utility = Case1Utility::kConsumptionCost;
  for (Index i = 0; i < s.user_count(); ++i) {
    CHECK(misreport_sweep(s, i, honest).worst_margin() >= -1e-9);
  }
}

TEST_CASE("infeasible misreports are skipped, not scored") {
  // Scaling user 0 up past the energy budget breaks the rebuilt scenario.
  const Scenario s = make_scenario(MechanismKind::kCase4, {4.0, 4.0},
                                   {{3.0, 0.0}, {3.0, 2.0}});
  SweepOptions opts;
  opts.factors = {1.0, 2.0, 100.0};
  const MisreportSweep sweep = misreport_sweep(s, 1, opts);
  REQUIRE(sweep.samples.size() == 3);
  CHECK_FALSE(sweep.samples[0].skipped);
  CHECK(sweep.samples[2].skipped);
  CHECK(std::isfinite(sweep.worst_margin()));
}

TEST_CASE("property audit passes the rationing worked example") {
  const Scenario s = make_scenario(MechanismKind::kCase3, {6.0},
                                   {{4.0}, {4.0}});
  const PropertyReport report = check_properties(s);
  CHECK_FALSE(report.any_violated());
  for (const char* property :
       {"capacity", "full_utilization", "no_positive_transfer",
        "individual_rationality", "truthfulness", "welfare_vs_oracle"}) {
    const PropertyVerdict* verdict = report.find(property);
    REQUIRE(verdict != nullptr);
    CHECK(verdict->status == PropertyStatus::kHolds);
  }
  CHECK(report.find("proportionality") == nullptr);
}

TEST_CASE("recorded properties carry witnesses when their margin dips") {
  const Scenario s = make_scenario(MechanismKind::kCase1, {10.0},
                                   {{6.0}, {5.0}});
  const PropertyReport report = check_properties(s);
  CHECK_FALSE(report.any_violated());  // case 1 records, never asserts

  const PropertyVerdict* rationality = report.find("individual_rationality");
  REQUIRE(rationality != nullptr);
  CHECK(rationality->status == PropertyStatus::kRecordedOnly);
  CHECK(rationality->margin == doctest::Approx(-5.0));
  REQUIRE(rationality->witness.has_value());
  CHECK(rationality->witness->user == 0);

  const PropertyVerdict* truthfulness = report.find("truthfulness");
  REQUIRE(truthfulness != nullptr);
  CHECK(truthfulness->status == PropertyStatus::kRecordedOnly);
  REQUIRE(truthfulness->witness.has_value());
  CHECK(truthfulness->witness->factor == 0.0);
}

TEST_CASE("oracle verdict degrades to recorded when the budget is blown") {
  const Scenario s = make_scenario(MechanismKind::kCase3, {6.0},
                                   {{4.0}, {4.0}, {4.0}});
  PropertyOptions opts;
  opts.oracle.budget = 2.0;
  const PropertyReport report = check_properties(s, opts);
  const PropertyVerdict* verdict = report.find("welfare_vs_oracle");
  REQUIRE(verdict != nullptr);
  CHECK(verdict->status == PropertyStatus::kRecordedOnly);
  CHECK(std::isnan(verdict->margin));
  REQUIRE(verdict->witness.has_value());
  CHECK_FALSE(report.any_violated());
}

TEST_CASE("proportionality is audited only for the fixed-rule mechanism") {
  const Scenario s = make_scenario(MechanismKind::kCase5, {4.0},
                                   {{2.0}, {6.0}});
  const PropertyReport report = check_properties(s);
  const PropertyVerdict* verdict = report.find("proportionality");
  REQUIRE(verdict != nullptr);
  CHECK(verdict->status == PropertyStatus::kHolds);
  const PropertyVerdict* oracle = report.find("welfare_vs_oracle");
  REQUIRE(oracle != nullptr);
  CHECK(oracle->status == PropertyStatus::kRecordedOnly);
}
