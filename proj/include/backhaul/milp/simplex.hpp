// Copyright 2026 The backhaul-planner Authors
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

#include <span>
#include <vector>

#include "backhaul/milp/model.hpp"

namespace backhaul::milp {

struct LpOptions {
  double feas_tol = 1e-7;  // primal feasibility
  double opt_tol = 1e-9;   // reduced cost
  int max_iters = 0;       // 0 = scale with problem size
  bool honor_lazy = true;  // activate lazy rows on violation instead of up front
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalBreakdown };

struct LpResult {
  LpStatus status = LpStatus::NumericalBreakdown;
  std::vector<double> x;  // structural values when Optimal
  double objective = 0.0;
  int iterations = 0;
  int lazy_rounds = 0;
};

// Bounded-variable revised simplex over the model's rows with integrality
// relaxed. Dantzig pricing with a Bland's-rule fallback once a degeneracy
// streak trips. Rows marked lazy start inactive and are activated when the
// current optimum violates them; the returned solution satisfies every row.
LpResult solve_lp(const MilpModel& model, const LpOptions& opts = {});

// Same, with per-column bound overrides (branch-and-bound node bounds).
LpResult solve_lp(const MilpModel& model, std::span<const double> lo,
                  std::span<const double> hi, const LpOptions& opts = {});

}  // namespace backhaul::milp
