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

#include "gridmech/solvers.hpp"

namespace gridmech {

Eigen::VectorXd proportional_ration(
    const Eigen::Ref<const Eigen::VectorXd>& demands, double capacity) {
  const Index n = demands.size();
  double sum = 0.0;
  Index last_positive = -1;
  for (Index i = 0; i < n; ++i) {
    sum += demands[i];
    if (demands[i] > 0.0) last_positive = i;
  }
  if (sum <= capacity || last_positive < 0) {
    return demands;  // fits as declared (or nothing was asked for)
  }

  const double share = capacity / sum;  // sum > capacity >= 0, so sum > 0
  Eigen::VectorXd granted(n);
  for (Index i = 0; i < n; ++i) granted[i] = demands[i] * share;

  // Pin the column sum to the capacity: the last positive demand absorbs the
  // rounding residue of the other shares.
  double others = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (i != last_positive) others += granted[i];
  }
  granted[last_positive] = std::max(0.0, capacity - others);
  return granted;
}

}  // namespace gridmech
