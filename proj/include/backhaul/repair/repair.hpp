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

#include <map>
#include <set>
#include <span>
#include <vector>

#include "backhaul/formulations/formulation.hpp"

namespace backhaul::repair {

using form::Mode;

enum class EnRepairStatus {
  FeasibleAsIs,
  RepairedByRefinement,
  RepairedBySpareBandwidth,
  DeferredToIteration,
  Infeasible,
};

const char* to_string(EnRepairStatus s);

struct RepairReport {
  std::map<core::NodeId, EnRepairStatus> en_status;  // every EN exactly once
  int iterations_used = 0;                           // residual re-runs
  core::DeploymentPlan final_plan;
};

struct RepairConfig {
  int max_iterations = 3;
  bool skip_refine = false;
  double refine_factor = 2.0;
  double gap_target = 0.0;
  double time_limit_s = 1800.0;
  bool deterministic = true;
};

// Links whose flow exceeds the true (nonlinear) capacity of the allotted
// resources by more than 1e-6 relative. Links carrying flow with no live
// allocation count as violated.
std::vector<core::LinkKey> check_true_capacity(const core::DeploymentPlan& plan,
                                               const core::Topology& t, Mode mode);

// Rebuilds the formulation with its grid counts scaled by `factor` and
// re-solves. The prior incumbent's binary assignment is revalidated against
// the tightened model and, when still feasible, seeds the upper bound (the
// objective only depends on the binaries, so the value carries over).
milp::BnbResult refine_and_resolve(form::Formulation& f, const core::Topology& t,
                                   double factor, const milp::BnbResult& prior,
                                   const RepairConfig& cfg);

struct SparePassResult {
  bool converged = false;
  int rounds = 0;
  core::DeploymentPlan plan;                 // allocation for served ENs only
  std::vector<core::NodeId> unserved_ens;    // sorted
};

// Fixes deployment and scheduling from the incumbent and re-optimizes the
// continuous variables against the true capacity via adaptive tangent outer
// approximation (Kelley). raw_incumbent, when given, supplies the exact MILP
// schedule including zero-power channels.
SparePassResult spare_bandwidth_pass(const core::DeploymentPlan& plan,
                                     const form::Formulation& f, const core::Topology& t,
                                     const std::vector<double>* raw_incumbent = nullptr);

struct ResidualTopology {
  core::Topology topo;
  std::vector<core::NodeId> to_original;  // local id -> id in the input topology
};

// Sub-topology of the still-unserved ENs, the unselected candidates and all
// gateways, with capacity consumed by the accepted partial plan subtracted
// from the gateway budgets (selected ANs are not reusable; gateways are).
ResidualTopology iterate_residual(const core::Topology& t,
                                  std::span<const core::NodeId> infeasible_ens,
                                  std::span<const core::NodeId> unselected_ans,
                                  const core::DeploymentPlan& accepted, Mode mode);

// Branch-and-bound on the formulation; when the model is infeasible as
// printed (demand equalities), falls back to a two-stage max-service solve
// and reports the underserved ENs.
milp::BnbResult solve_with_fallback(const form::Formulation& f, const core::Topology& t,
                                    const RepairConfig& cfg,
                                    std::vector<core::NodeId>* underserved);

// Full repair pipeline: tighten the relaxation, look for spare bandwidth,
// then iterate on the residual topology; at most cfg.max_iterations rounds.
RepairReport repair(const core::DeploymentPlan& plan, form::Formulation& f,
                    const milp::BnbResult& sol, const core::Topology& t,
                    const RepairConfig& cfg);

}  // namespace backhaul::repair
