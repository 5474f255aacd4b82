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

#include <optional>
#include <vector>

#include "backhaul/milp/model.hpp"
#include "backhaul/milp/simplex.hpp"

namespace backhaul::milp {

struct BnbOptions {
  double gap_target = 0.0;      // stop when (UB-LB)/max(UB,eps) <= this
  double time_limit_s = 1800.0;
  bool deterministic = true;    // sequential best-first order (always on)
  long max_nodes = 100'000'000;
  double int_tol = 1e-6;
  bool collect_trace = false;
  LpOptions lp;
};

enum class BnbStatus { Optimal, GapReached, TimeLimit, Infeasible };

struct BnbTrace {
  std::vector<int> branch_columns;        // in branching order
  std::vector<double> incumbent_objectives;  // each improvement
};

struct BnbResult {
  BnbStatus status = BnbStatus::Infeasible;
  std::optional<std::vector<double>> incumbent;
  double objective = 0.0;     // valid when incumbent present
  double lower_bound = 0.0;
  double gap = 0.0;           // (objective - lower_bound) / max(objective, eps)
  long nodes_explored = 0;
  BnbTrace trace;
};

// Known-feasible assignment used to seed the incumbent.
struct WarmStart {
  std::vector<double> x;
  double objective = 0.0;
};

// Best-first branch and bound. Lower bounds come from the LP relaxation at
// each node; the branching variable is the fractional binary with (highest
// priority, most fractional, lowest column). Deterministic for fixed inputs.
BnbResult branch_and_bound(const MilpModel& model, const BnbOptions& opts = {},
                           const std::optional<WarmStart>& warm = std::nullopt);

// Copy of the model with the given binaries pinned (convenience wrapper
// around MilpModel::with_fixed_binaries).
MilpModel warm_fix(const MilpModel& model,
                   std::span<const std::pair<int, double>> fixed);

}  // namespace backhaul::milp
