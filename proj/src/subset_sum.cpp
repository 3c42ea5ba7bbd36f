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

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gridmech/solvers.hpp"

namespace gridmech {

namespace {

constexpr double kTieBand = 1e-9;       // totals within this band tie
constexpr Index kExhaustiveLimit = 20;  // dispatcher threshold

double subset_total(const Eigen::Ref<const Eigen::VectorXd>& weights,
                    std::uint32_t mask) {
  double total = 0.0;
  for (Index i = 0; i < weights.size(); ++i) {
    if (mask & (1u << i)) total += weights[i];
  }
  return total;
}

std::vector<Index> mask_to_indices(std::uint32_t mask, Index n) {
  std::vector<Index> indices;
  for (Index i = 0; i < n; ++i) {
    if (mask & (1u << i)) indices.push_back(i);
  }
  return indices;
}

// Integer kW at 1e-3 resolution. Values that sit on the millikW lattice (up
// to fp noise) map exactly; anything else rounds up so a set that fits with
// the rounded weights also fits with the true ones.
long long scale_weight_up(double w) {
  const double r = w * 1000.0;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-7 * std::max(1.0, std::abs(r))) {
    return static_cast<long long>(nearest);
  }
  return static_cast<long long>(std::ceil(r));
}

long long scale_capacity_down(double cap) {
  const double r = cap * 1000.0;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-7 * std::max(1.0, std::abs(r))) {
    return static_cast<long long>(nearest);
  }
  return static_cast<long long>(std::floor(r));
}

}  // namespace

SubsetSumResult subset_sum_max_exhaustive(
    const Eigen::Ref<const Eigen::VectorXd>& weights, double capacity) {
  const Index n = weights.size();
  assert(n <= 25 && "exhaustive subset search is exponential");
  const std::uint32_t mask_end = 1u << n;

  double best = 0.0;  // the empty subset always fits
  for (std::uint32_t mask = 1; mask < mask_end; ++mask) {
    const double total = subset_total(weights, mask);
    if (total <= capacity + kTieBand && total > best) best = total;
  }

  // Lexicographically smallest index sequence among the near-optimal totals.
  // The empty subset is the running candidate when best is 0.
  std::uint32_t best_mask = 0;
  std::vector<Index> best_indices;
  bool have_candidate = best <= kTieBand;  // empty set ties a zero optimum
  for (std::uint32_t mask = 1; mask < mask_end; ++mask) {
    const double total = subset_total(weights, mask);
    if (total > capacity + kTieBand || total < best - kTieBand) continue;
    std::vector<Index> indices = mask_to_indices(mask, n);
    if (!have_candidate ||
        (best_indices.empty() ? false : indices < best_indices)) {
      best_mask = mask;
      best_indices = std::move(indices);
      have_candidate = true;
    }
  }

  SubsetSumResult result;
  result.chosen = mask_to_indices(best_mask, n);
  result.total = subset_total(weights, best_mask);
  return result;
}

SubsetSumResult subset_sum_max_scaled(
    const Eigen::Ref<const Eigen::VectorXd>& weights, double capacity) {
  const Index n = weights.size();
  std::vector<long long> w(static_cast<size_t>(n));
  long long weight_sum = 0;
  for (Index i = 0; i < n; ++i) {
    w[static_cast<size_t>(i)] = scale_weight_up(weights[i]);
    weight_sum += w[static_cast<size_t>(i)];
  }
  // Nothing above the total weight is reachable, so cap the table there.
  const long long cap =
      std::min(weight_sum, std::max(0ll, scale_capacity_down(capacity)));

  // reach[i][j]: some subset of items i..n-1 sums to exactly j. Built from
  // the back so the front-to-back reconstruction below can ask "can the
  // remainder still be completed?" after each include/skip decision.
  const size_t width = static_cast<size_t>(cap) + 1;
  std::vector<std::vector<bool>> reach(static_cast<size_t>(n) + 1,
                                       std::vector<bool>(width, false));
  reach[static_cast<size_t>(n)][0] = true;
  for (Index i = n - 1; i >= 0; --i) {
    const size_t ui = static_cast<size_t>(i);
    const long long wi = w[ui];
    for (long long j = 0; j <= cap; ++j) {
      bool ok = reach[ui + 1][static_cast<size_t>(j)];
      if (!ok && wi <= j) ok = reach[ui + 1][static_cast<size_t>(j - wi)];
      reach[ui][static_cast<size_t>(j)] = ok;
    }
  }

  long long target = 0;
  for (long long j = cap; j >= 0; --j) {
    if (reach[0][static_cast<size_t>(j)]) {
      target = j;
      break;
    }
  }

  // Front-to-back greedy: taking the earliest item that still allows a
  // completion yields the lexicographically smallest index sequence; once
  // the remainder hits zero, stopping beats appending zero-weight items.
  SubsetSumResult result;
  long long rem = target;
  for (Index i = 0; i < n && rem > 0; ++i) {
    const size_t ui = static_cast<size_t>(i);
    if (w[ui] <= rem && reach[ui + 1][static_cast<size_t>(rem - w[ui])]) {
      result.chosen.push_back(i);
      rem -= w[ui];
    }
  }
  for (Index i : result.chosen) result.total += weights[i];
  return result;
}

SubsetSumResult subset_sum_max(const Eigen::Ref<const Eigen::VectorXd>& weights,
                               double capacity) {
  if (weights.size() <= kExhaustiveLimit) {
    return subset_sum_max_exhaustive(weights, capacity);
  }
  return subset_sum_max_scaled(weights, capacity);
}

}  // namespace gridmech
