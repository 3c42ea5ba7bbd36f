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
#include <limits>

#include "gridmech/scenario.hpp"

#include "test_support.hpp"

using namespace gridmech;
using gridmech::test::make_scenario;
using gridmech::test::vec;

namespace {

bool has_code(const std::vector<Violation>& violations, ViolationCode code) {
  for (const Violation& violation : violations) {
    if (violation.code == code) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("energy integrates power over slots") {
  PowerSeries series{vec({2.0, 3.0}), 0.5};
  CHECK(energy_of(series) == doctest::Approx(2.5));

  PowerSeries zero{Eigen::VectorXd::Zero(4), 1.0};
  CHECK(energy_of(zero) == 0.0);

  // Linearity in the values.
  PowerSeries a{vec({1.5, 0.25, 4.0}), 2.0};
  PowerSeries b{vec({0.5, 2.75, 1.0}), 2.0};
  PowerSeries sum{a.values + b.values, 2.0};
  CHECK(energy_of(sum) ==
        doctest::Approx(energy_of(a) + energy_of(b)).epsilon(1e-12));
}

TEST_CASE("aggregate demand and headroom") {
  const Scenario s = make_scenario(MechanismKind::kCase4, {4.0, 4.0},
                                   {{3.0, 0.0}, {3.0, 2.0}});
  const PowerSeries aggregate = aggregate_demand(s);
  CHECK(aggregate.values[0] == 6.0);
  CHECK(aggregate.values[1] == 2.0);
  CHECK(aggregate.slot_hours == s.slot_hours());

  const Eigen::VectorXd head = headroom(s);
  for (Index t = 0; t < s.slot_count(); ++t) {
    CHECK(head[t] == s.production.values[t] - aggregate.values[t]);
  }
  CHECK(head[0] == -2.0);
  CHECK(head[1] == 2.0);

  const Scenario empty =
      make_scenario(MechanismKind::kCase3, {5.0}, {});
  CHECK(aggregate_demand(empty).values[0] == 0.0);
  CHECK(headroom(empty)[0] == 5.0);
}

TEST_CASE("demand matrix stacks users as rows") {
  const Scenario s = make_scenario(MechanismKind::kCase4, {4.0, 4.0},
                                   {{3.0, 0.0}, {3.0, 2.0}});
  const Eigen::MatrixXd x = demand_matrix(s);
  REQUIRE(x.rows() == 2);
  REQUIRE(x.cols() == 2);
  CHECK(x(0, 0) == 3.0);
  CHECK(x(0, 1) == 0.0);
  CHECK(x(1, 0) == 3.0);
  CHECK(x(1, 1) == 2.0);
}

TEST_CASE("remove_user keeps the others in order") {
  const Scenario s = make_scenario(MechanismKind::kCase2, {7.0},
                                   {{5.0}, {4.0}, {3.0}});
  const Scenario without = remove_user(s, 1);
  REQUIRE(without.user_count() == 2);
  CHECK(without.users[0].id == "u0");
  CHECK(without.users[1].id == "u2");
  CHECK(without.users[1].demand.values[0] == 3.0);
  CHECK(without.mechanism == s.mechanism);
}

TEST_CASE("scaling by one is the identity, bit for bit") {
  const Scenario s = make_scenario(MechanismKind::kCase3, {6.0},
                                   {{4.1234567890123}, {3.9876543210987}});
  const Scenario same = scale_user_demand(s, 0, 1.0);
  CHECK(same.users[0].demand.values[0] == s.users[0].demand.values[0]);

  const Scenario doubled = scale_user_demand(s, 1, 2.0);
  CHECK(doubled.users[0].demand.values[0] == s.users[0].demand.values[0]);
  CHECK(doubled.users[1].demand.values[0] ==
        doctest::Approx(2.0 * s.users[1].demand.values[0]));
}

TEST_CASE("a well-formed scenario validates cleanly") {
  const Scenario s = make_scenario(MechanismKind::kCase3, {6.0},
                                   {{4.0}, {4.0}});
  CHECK(validate_scenario(s).empty());

  const Scenario empty = make_scenario(MechanismKind::kCase3, {5.0}, {});
  CHECK(validate_scenario(empty).empty());
}

TEST_CASE("negative demand is the only complaint it raises") {
  Scenario s = make_scenario(MechanismKind::kCase3, {6.0}, {{4.0}, {-1.0}});
  const std::vector<Violation> violations = validate_scenario(s);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].code == ViolationCode::kNegativePower);
  CHECK(violations[0].message.find("u1") != std::string::npos);
}

TEST_CASE("demand series length must match production") {
  Scenario s = make_scenario(MechanismKind::kCase4, {4.0, 4.0},
                             {{3.0, 0.0}, {3.0}});
  const std::vector<Violation> violations = validate_scenario(s);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].code == ViolationCode::kSeriesLengthMismatch);
}

TEST_CASE("every remaining violation code has a trigger") {
  Scenario s = make_scenario(MechanismKind::kCase3, {6.0}, {{4.0}});

  SUBCASE("negative production") {
    s.production.values[0] = -6.0;
    CHECK(has_code(validate_scenario(s), ViolationCode::kNegativePower));
  }
  SUBCASE("non-finite demand") {
    s.users[0].demand.values[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK(has_code(validate_scenario(s), ViolationCode::kNonFiniteValue));
  }
  SUBCASE("empty production series") {
    s.production.values.resize(0);
    CHECK(has_code(validate_scenario(s), ViolationCode::kEmptySeries));
  }
  SUBCASE("non-positive slot duration") {
    s.production.slot_hours = 0.0;
    s.users[0].demand.slot_hours = 0.0;
    CHECK(has_code(validate_scenario(s),
                   ViolationCode::kNonPositiveSlotDuration));
  }
  SUBCASE("slot duration disagreement") {
    s.users[0].demand.slot_hours = 0.5;
    CHECK(has_code(validate_scenario(s), ViolationCode::kSlotDurationMismatch));
  }
  SUBCASE("duplicate user ids") {
    Scenario dup = make_scenario(MechanismKind::kCase3, {6.0},
                                 {{4.0}, {4.0}});
    dup.users[1].id = dup.users[0].id;
    CHECK(has_code(validate_scenario(dup), ViolationCode::kDuplicateUserId));
  }
  SUBCASE("penalty fraction out of range") {
    s.mechanism = MechanismKind::kCase6;
    s.params.c = 0.0;
    CHECK(has_code(validate_scenario(s),
                   ViolationCode::kPenaltyFractionOutOfRange));
  }
  SUBCASE("negative penalty slope") {
    s.mechanism = MechanismKind::kCase6;
    s.params.k = -1.0;
    CHECK(has_code(validate_scenario(s), ViolationCode::kPenaltySlopeInvalid));
  }
  SUBCASE("single-slot mechanism on a multi-slot scenario") {
    Scenario multi = make_scenario(MechanismKind::kCase1, {4.0, 4.0},
                                   {{3.0, 0.0}});
    CHECK(has_code(validate_scenario(multi),
                   ViolationCode::kMechanismSlotMismatch));
  }
}

TEST_CASE("violation codes print their names") {
  CHECK(std::string(to_string(ViolationCode::kNegativePower)) ==
        "NegativePower");
  CHECK(std::string(to_string(ViolationCode::kSeriesLengthMismatch)) ==
        "SeriesLengthMismatch");
  CHECK(std::string(to_string(ViolationCode::kMechanismSlotMismatch)) ==
        "MechanismSlotMismatch");
}
