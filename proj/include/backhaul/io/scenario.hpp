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
#include <stdexcept>
#include <string>

#include "backhaul/io/plan_io.hpp"

namespace backhaul::io {

struct ScenarioConfig {
  PlanMode mode = PlanMode::Microwave;
  double gap_target = 0.0;
  double time_limit_s = 1800.0;
  int grid_kp = 8;
  int grid_kw = 8;
  int repair_max_iterations = 3;
  bool deterministic = true;
  std::uint64_t seed = 0;
  bool skip_refine = false;
  bool dump_milp = false;
  core::BandId greedy_band = core::BandId::Sub6;
};

struct ScenarioResult {
  core::DeploymentPlan plan;
  std::optional<repair::RepairReport> report;
  SolverStats stats;
  double wall_time_s = 0.0;
  std::string milp_dump;  // LP-format text when cfg.dump_milp is set
};

// Topology failed structural validation (exit code 2).
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
// The solver produced no incumbent (exit code 3).
class NoIncumbentError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
// The emitted plan failed the independent post-hoc verifier.
class VerificationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dispatches to the chosen formulation or the greedy baseline, runs the
// repair pipeline, and re-checks the final plan with the post-hoc verifier
// before returning it.
ScenarioResult run_scenario(const core::Topology& t, const ScenarioConfig& cfg);

// Writes plan.json and plan.dot (and milp.lp when dumped) under out_dir.
void write_outputs(const ScenarioResult& result, const core::Topology& t,
                   const ScenarioConfig& cfg, const std::string& out_dir);

}  // namespace backhaul::io
