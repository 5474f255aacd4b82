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

namespace backhaul::io {

// DOT digraph of the plan: node shapes by kind, selected aggregators
// highlighted, edges labeled with band/channel/flow. Byte-stable across
// runs for a fixed input.
std::string export_graph(const core::DeploymentPlan& plan, const core::Topology& t,
                         PlanMode mode);
void write_graph(const core::DeploymentPlan& plan, const core::Topology& t, PlanMode mode,
                 const std::string& path);

}  // namespace backhaul::io
