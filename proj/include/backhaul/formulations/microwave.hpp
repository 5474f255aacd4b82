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
#include <vector>

#include "backhaul/formulations/an_gn_submodel.hpp"
#include "backhaul/milp/branch_and_bound.hpp"

namespace backhaul::form {

// Interference-free formulation: 28 GHz EN access with continuous
// bandwidth/power split plus the 60 GHz AN->GN segment. Minimizes
// aggregator deployment cost subject to flow balance, per-node budgets and
// tangent-relaxed capacities.
struct MicrowaveFormulation {
  milp::MilpModel model;
  int k_p = 0;
  int k_w = 0;

  std::vector<core::NodeId> an_ids;
  std::map<core::NodeId, int> y_col;

  std::vector<core::DirectedLink> en_links;  // 28 GHz EN -> {AN, GN}
  std::vector<int> en_f;
  std::vector<int> en_w;
  std::vector<int> en_p;
  std::vector<capacity::TangentGrid> en_grids;  // SI units

  AnGnSubmodel angn;

  // ENs with no usable adjacency, removed from the model with a warning.
  std::vector<core::NodeId> structurally_infeasible;
};

MicrowaveFormulation build_microwave(const core::Topology& t, int k_p, int k_w);

// Maps an incumbent back to named quantities in SI units; allocations below
// 1e-9 (model units) are zeroed, y values rounded. Throws when the result
// carries no incumbent.
core::DeploymentPlan extract_plan(const milp::BnbResult& sol,
                                  const MicrowaveFormulation& f,
                                  const core::Topology& t);

}  // namespace backhaul::form
