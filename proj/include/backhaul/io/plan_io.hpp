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

#include <string>

#include "backhaul/io/verifier.hpp"
#include "backhaul/repair/repair.hpp"

namespace backhaul::io {

struct SolverStats {
  long nodes_explored = 0;
  double gap = 0.0;
  std::string status;
  int lp_iterations = 0;
};

// Deterministic JSON rendering of the plan, repair report and solver
// statistics. Wall time is intentionally excluded so repeated runs emit
// identical bytes; the CLI prints timing to stdout instead.
std::string serialize_plan(const core::DeploymentPlan& plan,
                           const repair::RepairReport* report, const SolverStats& stats,
                           PlanMode mode);
void write_plan(const core::DeploymentPlan& plan, const repair::RepairReport* report,
                const SolverStats& stats, PlanMode mode, const std::string& path);

}  // namespace backhaul::io
