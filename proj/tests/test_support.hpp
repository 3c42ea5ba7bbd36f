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

#include <string>
#include <vector>

#include "gridmech/scenario.hpp"

namespace gridmech::test {

inline Eigen::VectorXd vec(std::vector<double> values) {
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<Index>(values.size()));
}

/// Scenario literal: one demand row per user, ids u0, u1, ...
inline Scenario make_scenario(MechanismKind kind,
                              std::vector<double> production,
                              std::vector<std::vector<double>> demands,
                              double slot_hours = 1.0,
                              PenaltyParams params = {}) {
  Scenario s;
  s.mechanism = kind;
  s.params = params;
  s.production.slot_hours = slot_hours;
  s.production.values = vec(std::move(production));
  Index i = 0;
  for (std::vector<double>& row : demands) {
    UserProfile user;
    user.id = "u" + std::to_string(i++);
    user.demand.slot_hours = slot_hours;
    user.demand.values = vec(std::move(row));
    s.users.push_back(std::move(user));
  }
  return s;
}

}  // namespace gridmech::test
