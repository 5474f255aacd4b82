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

#include "backhaul/formulations/microwave.hpp"
#include "backhaul/formulations/sub6.hpp"

namespace backhaul::form {

enum class Mode { Microwave, Sub6 };

// Mode-erased handle so the repair loop can rebuild and extract without
// caring which band model it drives.
struct Formulation {
  Mode mode = Mode::Microwave;
  int k_p = 8;
  int k_w = 8;
  std::optional<MicrowaveFormulation> microwave;
  std::optional<Sub6Formulation> sub6;

  static Formulation build(const core::Topology& t, Mode mode, int k_p, int k_w);
  void rebuild(const core::Topology& t, int new_k_p, int new_k_w);

  const milp::MilpModel& model() const;
  core::DeploymentPlan extract(const milp::BnbResult& sol, const core::Topology& t) const;
  const std::vector<core::NodeId>& structurally_infeasible() const;
  // All binary columns with their (rounded) values in x, for warm fixing.
  std::vector<std::pair<int, double>> binary_assignment(const std::vector<double>& x) const;
};

}  // namespace backhaul::form
