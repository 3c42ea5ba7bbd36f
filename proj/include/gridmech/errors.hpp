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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gridmech/scenario.hpp"

namespace gridmech {

/// A scenario failed validate_scenario; `violations` carries the full list.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string what, std::vector<Violation> violations)
      : std::runtime_error(std::move(what)), violations(std::move(violations)) {}
  std::vector<Violation> violations;
};

/// No allocation satisfies the mechanism's constraints (case 4 energy floors
/// can exceed what production admits).
class InfeasibleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scenario or report file is malformed (bad JSON, missing field, wrong
/// type). The message names the offending field.
class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An exhaustive search would exceed its evaluation budget.
class BudgetExceededError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gridmech
