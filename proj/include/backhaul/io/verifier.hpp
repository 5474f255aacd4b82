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
#include <vector>

#include "backhaul/core/types.hpp"

namespace backhaul::io {

enum class PlanMode { Microwave, Sub6, Greedy };

// Re-checks an emitted plan against every constraint family of its
// formulation straight from the topology: flow balance, budgets, SDMA order,
// per-interferer protocol threshold, radio limits and true capacity.
// Independent of the solver's own bookkeeping; an empty result means the
// plan stands. greedy_band names the access band a greedy plan was built for.
std::vector<std::string> verify_plan(const core::DeploymentPlan& plan,
                                     const core::Topology& t, PlanMode mode,
                                     core::BandId greedy_band = core::BandId::Sub6);

}  // namespace backhaul::io
