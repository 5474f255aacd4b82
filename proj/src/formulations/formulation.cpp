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

#include "backhaul/formulations/formulation.hpp"

#include <cmath>

namespace backhaul::form {

Formulation Formulation::build(const core::Topology& t, Mode mode, int k_p, int k_w) {
  Formulation f;
  f.mode = mode;
  f.k_p = k_p;
  f.k_w = k_w;
  if (mode == Mode::Microwave)
    f.microwave = build_microwave(t, k_p, k_w);
  else
    f.sub6 = build_sub6(t, k_p, k_p, k_w);
  return f;
}

void Formulation::rebuild(const core::Topology& t, int new_k_p, int new_k_w) {
  k_p = new_k_p;
  k_w = new_k_w;
  if (mode == Mode::Microwave) {
    microwave = build_microwave(t, new_k_p, new_k_w);
  } else {
    sub6 = build_sub6(t, new_k_p, new_k_p, new_k_w);
  }
}

const milp::MilpModel& Formulation::model() const {
  return mode == Mode::Microwave ? microwave->model : sub6->model;
}

core::DeploymentPlan Formulation::extract(const milp::BnbResult& sol,
                                          const core::Topology& t) const {
  return mode == Mode::Microwave ? extract_plan(sol, *microwave, t)
                                 : extract_plan(sol, *sub6, t);
}

const std::vector<core::NodeId>& Formulation::structurally_infeasible() const {
  return mode == Mode::Microwave ? microwave->structurally_infeasible
                                 : sub6->structurally_infeasible;
}

std::vector<std::pair<int, double>> Formulation::binary_assignment(
    const std::vector<double>& x) const {
  std::vector<std::pair<int, double>> out;
  const milp::MilpModel& m = model();
  for (int j = 0; j < m.num_vars(); ++j) {
    if (m.var(j).kind != milp::VarKind::Binary) continue;
    out.emplace_back(j, std::round(x[static_cast<std::size_t>(j)]));
  }
  return out;
}

}  // namespace backhaul::form
