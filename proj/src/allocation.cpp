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

#include "gridmech/allocation.hpp"

namespace gridmech {

double max_capacity_overshoot(const Scenario& s, const Allocation& a) {
  double worst = 0.0;
  bool first = true;
  for (Index t = 0; t < a.slot_count(); ++t) {
    double column = 0.0;
    for (Index i = 0; i < a.user_count(); ++i) column += a.grants(i, t);
    const double overshoot = column - s.production.values[t];
    if (first || overshoot > worst) {
      worst = overshoot;
      first = false;
    }
  }
  return worst;
}

bool allocation_feasible(const Scenario& s, const Allocation& a, double eps) {
  if (a.slot_count() != s.slot_count()) return false;
  for (Index i = 0; i < a.user_count(); ++i) {
    for (Index t = 0; t < a.slot_count(); ++t) {
      const double g = a.grants(i, t);
      if (!std::isfinite(g) || g < -eps) return false;
    }
  }
  return max_capacity_overshoot(s, a) <= eps;
}

}  // namespace gridmech
