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

#include <Eigen/Dense>

#include "gridmech/scenario.hpp"

namespace gridmech {

/// Power granted to each user per slot. Row i is user i (declaration order),
/// column t is slot t, entries in kW. Feasible allocations have nonnegative
/// finite entries and column sums within tolerance of production.
struct Allocation {
  Eigen::MatrixXd grants;

  Index user_count() const { return grants.rows(); }
  Index slot_count() const { return grants.cols(); }
};

/// Largest amount by which a column sum of `a` exceeds production (<= 0 when
/// the allocation never overshoots capacity). Zero for slot-less input.
double max_capacity_overshoot(const Scenario& s, const Allocation& a);

/// True when every entry is finite and >= -eps and no column sum exceeds
/// production by more than eps.
bool allocation_feasible(const Scenario& s, const Allocation& a, double eps);

}  // namespace gridmech
