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
#include <cstdint>
#include <limits>
#include <sstream>

#include "gridmech/oracle.hpp"

#include "gridmech/errors.hpp"
#include "gridmech/mechanisms.hpp"

// Everything in this file re-derives outcomes from the constraint definitions
// alone. It shares no optimization code with the mechanisms, so agreement
// between the two is evidence rather than tautology. The one deliberate
// overlap is policy: tie-breaking (case 2's lexicographic subset choice)
// follows the same documented rule, otherwise equally-good outcomes would
// differ for reasons that carry no information.

namespace gridmech {

namespace {

constexpr double kTieBand = 1e-9;

double slot0_demand_sum(const Scenario& s) {
  double sum = 0.0;
  for (const UserProfile& user : s.users) sum += user.demand.values[0];
  return sum;
}

OracleOutcome case1_oracle(const Scenario& s) {
  const double dt = s.slot_hours();
  double users = 0.0;
  for (Index i = 0; i < s.user_count(); ++i) {
    users += s.users[static_cast<size_t>(i)].demand.values[0] * dt;
  }
  const double welfare_on = s.production.values[0] * dt - users;

  OracleOutcome out;
  out.allocation.grants = Eigen::MatrixXd::Zero(s.user_count(), 1);
  if (welfare_on >= 0.0) {  // the boundary keeps service on
    for (Index i = 0; i < s.user_count(); ++i) {
      out.allocation.grants(i, 0) =
          s.users[static_cast<size_t>(i)].demand.values[0];
    }
    out.welfare = welfare_on;
  }
  return out;
}

OracleOutcome case2_oracle(const Scenario& s, const OracleOptions& options) {
  const Index n = s.user_count();
  if (n > 25 || std::pow(2.0, static_cast<double>(n)) > options.budget) {
    throw BudgetExceededError("subset enumeration exceeds the search budget");
  }
  const double capacity = s.production.values[0];
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) {
    x[i] = s.users[static_cast<size_t>(i)].demand.values[0];
  }

  const auto total_of = [&x, n](std::uint32_t mask) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) total += x[i];
    }
    return total;
  };

  const std::uint32_t mask_end = static_cast<std::uint32_t>(1u << n);
  double best = 0.0;
  for (std::uint32_t mask = 1; mask < mask_end; ++mask) {
    const double total = total_of(mask);
    if (total <= capacity + kTieBand && total > best) best = total;
  }

  std::uint32_t best_mask = 0;
  std::vector<Index> best_indices;
  bool have = best <= kTieBand;  // the empty subset ties a zero optimum
  for (std::uint32_t mask = 1; mask < mask_end; ++mask) {
    const double total = total_of(mask);
    if (total > capacity + kTieBand || total < best - kTieBand) continue;
    std::vector<Index> indices;
    for (Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) indices.push_back(i);
    }
    if (!have || (!best_indices.empty() && indices < best_indices)) {
      best_mask = mask;
      best_indices = std::move(indices);
      have = true;
    }
  }

  OracleOutcome out;
  out.allocation.grants = Eigen::MatrixXd::Zero(n, 1);
  for (Index i = 0; i < n; ++i) {
    if (best_mask & (1u << i)) out.allocation.grants(i, 0) = x[i];
  }
  const double dt = s.slot_hours();
  for (Index i = 0; i < n; ++i) {
    out.welfare += std::min(out.allocation.grants(i, 0), x[i]) * dt;
  }
  return out;
}

// Candidate grant levels for one cell: multiples of the resolution up to the
// ceiling, with the declared demand (and for case 4 the slot's production)
// always present so exact fits stay reachable.
std::vector<double> cell_grid(double demand, double production,
                              double resolution, bool up_to_production) {
  const double ceiling = up_to_production ? production : demand;
  std::vector<double> grid;
  for (double v = 0.0, k = 1.0; v < ceiling; v = k++ * resolution) {
    grid.push_back(v);
  }
  grid.push_back(ceiling);
  if (up_to_production && demand < production) {
    grid.push_back(demand);
    std::sort(grid.begin(), grid.end());
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

OracleOutcome grid_oracle(const Scenario& s, const OracleOptions& options) {
  const Index n = s.user_count();
  const Index slots = s.slot_count();
  const Index cells = n * slots;
  const double dt = s.slot_hours();
  const bool shifting = s.mechanism == MechanismKind::kCase4;
  const Eigen::MatrixXd x = demand_matrix(s);

  if (cells > 10000) {
    throw BudgetExceededError("grid bookkeeping exceeds the search budget");
  }

  // Cell k covers slot k/n, user k%n: slot-major order so the capacity of a
  // column is exhausted (and pruned) as early as possible.
  std::vector<std::vector<double>> grids(static_cast<size_t>(cells));
  double points = 1.0;
  for (Index k = 0; k < cells; ++k) {
    const Index t = k / n;
    const Index i = k % n;
    grids[static_cast<size_t>(k)] =
        cell_grid(x(i, t), s.production.values[t], options.resolution, shifting);
    points *= static_cast<double>(grids[static_cast<size_t>(k)].size());
    if (points > options.budget) {
      throw BudgetExceededError("grant grid exceeds the search budget");
    }
  }

  Eigen::MatrixXd current = Eigen::MatrixXd::Zero(n, slots);
  Eigen::VectorXd col_used = Eigen::VectorXd::Zero(slots);
  Eigen::VectorXd row_used = Eigen::VectorXd::Zero(n);

  OracleOutcome out;
  out.welfare = -std::numeric_limits<double>::infinity();
  double value = 0.0;
  bool found = false;

  const auto leaf = [&] {
    if (shifting) {
      for (Index i = 0; i < n; ++i) {
        if (row_used[i] < x.row(i).sum() - kTieBand) return;
      }
    }
    if (value > out.welfare) {
      out.welfare = value;
      out.allocation.grants = current;
      found = true;
    }
  };

  const auto descend = [&](auto&& self, Index k) -> void {
    if (k == cells) {
      leaf();
      return;
    }
    const Index t = k / n;
    const Index i = k % n;
    for (double g : grids[static_cast<size_t>(k)]) {
      if (col_used[t] + g > s.production.values[t] + kTieBand) break;
      current(i, t) = g;
      col_used[t] += g;
      row_used[i] += g;
      const double gain = std::min(g, x(i, t)) * dt;
      value += gain;
      self(self, k + 1);
      value -= gain;
      row_used[i] -= g;
      col_used[t] -= g;
      current(i, t) = 0.0;
    }
  };
  descend(descend, 0);

  if (!found) {
    throw InfeasibleError("search grid holds no feasible allocation");
  }
  return out;
}

}  // namespace

OracleOutcome brute_force_outcome(const Scenario& s,
                                  const OracleOptions& options) {
  std::vector<Violation> violations = validate_scenario(s);
  if (!violations.empty()) {
    throw ValidationError("scenario is invalid", std::move(violations));
  }
  switch (s.mechanism) {
    case MechanismKind::kCase1:
      return case1_oracle(s);
    case MechanismKind::kCase2:
      return case2_oracle(s, options);
    default:
      return grid_oracle(s, options);
  }
}

double oracle_welfare_tolerance(const Scenario& s, double resolution) {
  if (s.mechanism == MechanismKind::kCase1 ||
      s.mechanism == MechanismKind::kCase2) {
    return 0.0;
  }
  return resolution * static_cast<double>(s.user_count()) *
         static_cast<double>(s.slot_count()) * s.slot_hours();
}

double case3_payment_formula(const Scenario& s, const Allocation& a, Index i) {
  const double production = s.production.values[0];
  const double dt = s.slot_hours();
  const double all = slot0_demand_sum(s);
  const double others =
      all - s.users[static_cast<size_t>(i)].demand.values[0];
  if (all <= production) return 0.0;  // nobody is rationed
  if (others >= production) return a.grants(i, 0) * dt;
  return (others - (production - a.grants(i, 0))) * dt;
}

// ---------------------------------------------------------------------------
// Misreport sweeps
// ---------------------------------------------------------------------------

const std::vector<double>& default_misreport_factors() {
  static const std::vector<double> factors = {0.0,  0.25, 0.5,  0.75, 1.0,
                                              1.25, 1.5,  1.75, 2.0};
  return factors;
}

double MisreportSweep::worst_margin() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const MisreportSample& sample : samples) {
    if (sample.skipped) continue;
    worst = std::min(worst, truthful_utility - sample.utility);
  }
  return worst;
}

double experienced_utility(const Scenario& truth, Index user,
                           const Scenario& reported,
                           const MechanismResult& outcome,
                           Case1Utility model) {
  const double dt = truth.slot_hours();
  const Eigen::VectorXd& want =
      truth.users[static_cast<size_t>(user)].demand.values;
  const double payment = outcome.payments[user];

  double value = 0.0;
  switch (truth.mechanism) {
    case MechanismKind::kCase1: {
      const bool on = case1_accepts(reported);
      if (model == Case1Utility::kConsumptionCost) {
        // When service is on, a user draws (and bears the cost of) their true
        // need regardless of what they declared; when off, nobody draws.
        value = on ? -want[0] * dt : 0.0;
      } else {
        // The granted power serves the true need only when it covers it.
        const double granted = on ? outcome.allocation.grants(user, 0) : 0.0;
        value = granted >= want[0] ? want[0] * dt : 0.0;
      }
      break;
    }
    case MechanismKind::kCase2: {
      const double granted = outcome.allocation.grants(user, 0);
      value = granted >= want[0] ? want[0] * dt : 0.0;
      break;
    }
    default: {
      for (Index t = 0; t < outcome.allocation.slot_count(); ++t) {
        value += std::min(outcome.allocation.grants(user, t), want[t]) * dt;
      }
      break;
    }
  }
  return value - payment;
}

MisreportSweep misreport_sweep(const Scenario& s, Index user,
                               const SweepOptions& options) {
  const std::vector<double>& factors =
      options.factors.empty() ? default_misreport_factors() : options.factors;

  const MechanismResult baseline = run_mechanism(s, options.run);
  MisreportSweep sweep;
  sweep.user = user;
  sweep.truthful_utility =
      experienced_utility(s, user, s, baseline, options.case1_utility);

  for (double factor : factors) {
    MisreportSample sample;
    sample.factor = factor;
    if (factor == 1.0) {
      sample.utility = sweep.truthful_utility;
    } else {
      const Scenario reported = scale_user_demand(s, user, factor);
      try {
        const MechanismResult outcome = run_mechanism(reported, options.run);
        sample.utility = experienced_utility(s, user, reported, outcome,
                                             options.case1_utility);
      } catch (const InfeasibleError&) {
        sample.skipped = true;  // that lie broke the scenario, nothing to rank
      }
    }
    sweep.samples.push_back(sample);
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Property audit
// ---------------------------------------------------------------------------

const char* to_string(PropertyStatus status) {
  switch (status) {
    case PropertyStatus::kHolds:
      return "holds";
    case PropertyStatus::kViolated:
      return "violated";
    case PropertyStatus::kRecordedOnly:
      return "recorded";
  }
  return "unknown";
}

const PropertyVerdict* PropertyReport::find(const std::string& property) const {
  for (const PropertyVerdict& verdict : verdicts) {
    if (verdict.property == property) return &verdict;
  }
  return nullptr;
}

bool PropertyReport::any_violated() const {
  for (const PropertyVerdict& verdict : verdicts) {
    if (verdict.status == PropertyStatus::kViolated) return true;
  }
  return false;
}

namespace {

PropertyWitness make_witness(const Scenario& s, Index user, double factor,
                             std::string detail) {
  PropertyWitness witness;
  witness.scenario = s;
  witness.user = user;
  witness.factor = factor;
  witness.detail = std::move(detail);
  return witness;
}

// Shapes a margin into a verdict: asserted properties flip to violated below
// -tolerance, recorded ones keep their status but still carry a witness for
// reproduction whenever the margin is negative.
PropertyVerdict judge(std::string property, bool asserted, double margin,
                      double tolerance, const Scenario& s, Index user,
                      double factor, const std::string& detail) {
  PropertyVerdict verdict;
  verdict.property = std::move(property);
  verdict.margin = margin;
  const bool negative = margin < -tolerance;
  if (asserted) {
    verdict.status = negative ? PropertyStatus::kViolated : PropertyStatus::kHolds;
  } else {
    verdict.status = PropertyStatus::kRecordedOnly;
  }
  if (negative) {
    verdict.witness = make_witness(s, user, factor, detail);
  }
  return verdict;
}

}  // namespace

PropertyReport check_properties(const Scenario& s,
                                const PropertyOptions& options) {
  const MechanismResult result = run_mechanism(s, options.run);
  const Index n = s.user_count();
  const MechanismKind kind = s.mechanism;
  const double inf = std::numeric_limits<double>::infinity();
  PropertyReport report;

  {  // capacity: every column sum stays within production
    double margin = inf;
    Index worst_slot = -1;
    for (Index t = 0; t < s.slot_count(); ++t) {
      double column = 0.0;
      for (Index i = 0; i < n; ++i) column += result.allocation.grants(i, t);
      const double head = s.production.values[t] - column;
      if (head < margin) {
        margin = head;
        worst_slot = t;
      }
    }
    std::ostringstream detail;
    detail << "slot " << worst_slot << " overshoots production by "
           << (margin < 0 ? -margin : 0.0) << " kW";
    report.verdicts.push_back(judge("capacity", true, margin,
                                    options.tolerance, s, -1,
                                    std::numeric_limits<double>::quiet_NaN(),
                                    detail.str()));
  }

  if (kind == MechanismKind::kCase3) {  // the whole supply is put to use
    double column = 0.0;
    for (Index i = 0; i < n; ++i) column += result.allocation.grants(i, 0);
    const double target =
        std::min(s.production.values[0], slot0_demand_sum(s));
    const double margin = 0.0 - std::abs(column - target);  // +0 when exact
    std::ostringstream detail;
    detail << "granted " << column << " kW of a usable " << target << " kW";
    report.verdicts.push_back(judge("full_utilization", true, margin,
                                    options.tolerance, s, -1,
                                    std::numeric_limits<double>::quiet_NaN(),
                                    detail.str()));
  }

  if (kind == MechanismKind::kCase5) {  // rationed slots split proportionally
    double deviation = 0.0;
    const Eigen::MatrixXd x = demand_matrix(s);
    for (Index t = 0; t < s.slot_count(); ++t) {
      double demand = 0.0, column = 0.0;
      for (Index i = 0; i < n; ++i) {
        demand += x(i, t);
        column += result.allocation.grants(i, t);
      }
      if (demand <= s.production.values[t]) continue;  // not rationed
      deviation = std::max(deviation,
                           std::abs(column - s.production.values[t]));
      for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
          const double cross = result.allocation.grants(i, t) * x(j, t) -
                               result.allocation.grants(j, t) * x(i, t);
          deviation = std::max(deviation, std::abs(cross));
        }
      }
    }
    report.verdicts.push_back(judge("proportionality", true, 0.0 - deviation,
                                    options.tolerance, s, -1,
                                    std::numeric_limits<double>::quiet_NaN(),
                                    "worst deviation from exact shares"));
  }

  {  // no positive transfer: the mechanism never pays a user
    double margin = inf;
    Index worst_user = -1;
    for (Index i = 0; i < n; ++i) {
      if (result.payments[i] < margin) {
        margin = result.payments[i];
        worst_user = i;
      }
    }
    std::ostringstream detail;
    detail << "smallest payment is " << (n > 0 ? margin : 0.0);
    report.verdicts.push_back(judge("no_positive_transfer", true, margin,
                                    options.tolerance, s, worst_user,
                                    std::numeric_limits<double>::quiet_NaN(),
                                    detail.str()));
  }

  {  // individual rationality; guaranteed only by some of the mechanisms
    const bool asserted = kind == MechanismKind::kCase2 ||
                          kind == MechanismKind::kCase3 ||
                          kind == MechanismKind::kCase4;
    double margin = inf;
    Index worst_user = -1;
    for (Index i = 0; i < n; ++i) {
      if (result.utilities[i] < margin) {
        margin = result.utilities[i];
        worst_user = i;
      }
    }
    std::ostringstream detail;
    detail << "smallest utility is " << (n > 0 ? margin : 0.0);
    if (!asserted) detail << " (not guaranteed by this mechanism)";
    report.verdicts.push_back(judge("individual_rationality", asserted, margin,
                                    options.tolerance, s, worst_user,
                                    std::numeric_limits<double>::quiet_NaN(),
                                    detail.str()));
  }

  {  // truthfulness: the misreport grid never beats the honest report
    const bool asserted =
        kind == MechanismKind::kCase2 || kind == MechanismKind::kCase3 ||
        (kind == MechanismKind::kCase1 &&
         options.case1_utility == Case1Utility::kConsumptionCost);
    SweepOptions sweep_options;
    sweep_options.factors = options.factors;
    sweep_options.case1_utility = options.case1_utility;
    sweep_options.run = options.run;

    double margin = inf;
    Index worst_user = -1;
    double worst_factor = std::numeric_limits<double>::quiet_NaN();
    for (Index i = 0; i < n; ++i) {
      const MisreportSweep sweep = misreport_sweep(s, i, sweep_options);
      for (const MisreportSample& sample : sweep.samples) {
        if (sample.skipped) continue;
        const double gap = sweep.truthful_utility - sample.utility;
        if (gap < margin) {
          margin = gap;
          worst_user = i;
          worst_factor = sample.factor;
        }
      }
    }
    std::ostringstream detail;
    if (worst_user >= 0) {
      detail << "worst margin " << margin << " at user " << worst_user
             << " scaling by " << worst_factor;
    } else {
      detail << "no comparable misreport";
    }
    if (!asserted) detail << " (not guaranteed by this mechanism)";
    report.verdicts.push_back(judge("truthfulness", asserted, margin,
                                    options.tolerance, s, worst_user,
                                    worst_factor, detail.str()));
  }

  if (options.with_oracle) {  // welfare against the exhaustive search
    // Case 5 applies a fixed sharing rule, so no welfare-argmax is claimed;
    // its gap against the oracle is recorded without a verdict.
    const bool asserted = kind != MechanismKind::kCase5;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    PropertyVerdict verdict;
    verdict.property = "welfare_vs_oracle";
    if (n == 0) {
      verdict.status = PropertyStatus::kHolds;  // nothing to search
    } else {
      try {
        const OracleOutcome oracle = brute_force_outcome(s, options.oracle);
        const double allowed =
            oracle_welfare_tolerance(s, options.oracle.resolution);
        const double gap = std::abs(result.welfare - oracle.welfare);
        verdict.margin = allowed - gap;
        const bool negative = verdict.margin < -options.tolerance;
        verdict.status = asserted ? (negative ? PropertyStatus::kViolated
                                              : PropertyStatus::kHolds)
                                  : PropertyStatus::kRecordedOnly;
        if (negative) {
          std::ostringstream detail;
          detail << "engine welfare " << result.welfare << " vs oracle "
                 << oracle.welfare << " (allowed gap " << allowed << ")";
          verdict.witness = make_witness(s, -1, nan, detail.str());
        }
      } catch (const BudgetExceededError& err) {
        verdict.status = PropertyStatus::kRecordedOnly;
        verdict.margin = nan;
        verdict.witness =
            make_witness(s, -1, nan, std::string("oracle skipped: ") + err.what());
      } catch (const InfeasibleError& err) {
        verdict.status = PropertyStatus::kRecordedOnly;
        verdict.margin = nan;
        verdict.witness =
            make_witness(s, -1, nan, std::string("oracle skipped: ") + err.what());
      }
    }
    report.verdicts.push_back(verdict);
  }

  return report;
}

}  // namespace gridmech
