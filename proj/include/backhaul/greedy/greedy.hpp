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

#include <vector>

#include "backhaul/core/types.hpp"

namespace backhaul::greedy {

// An EN belongs to a center's coverage iff the full-power, full-bandwidth
// capacity of the (EN, center) link meets the EN's demand.
struct CoverageSet {
  core::NodeId center = -1;
  std::vector<core::NodeId> members;  // sorted
  double weight = 0.0;                // deploy cost; 0 for gateways
};

std::vector<CoverageSet> coverage_sets(const core::Topology& t, core::BandId band);

struct GreedyStats {
  long long operations = 0;  // inner-loop work, for the polynomial-time check
};

// Two-phase greedy placement: gateways by maximum remaining coverage first,
// then candidates by coverage-per-cost. Each covered EN is assigned to
// exactly one center (full demand routed); uncovered ENs are reported
// infeasible. Placement and assignment only; no power or channel detail.
core::DeploymentPlan greedy_place(const core::Topology& t, core::BandId band,
                                  GreedyStats* stats = nullptr);

}  // namespace backhaul::greedy
