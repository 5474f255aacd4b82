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

#include "backhaul/capacity/capacity.hpp"
#include "backhaul/core/topology.hpp"
#include "backhaul/milp/model.hpp"

namespace backhaul::form {

// Model coordinates: flows in Mbps; per-band power and bandwidth as
// fractions of the per-radio maxima. Keeps every matrix coefficient within
// a few orders of magnitude of 1.
constexpr double kFlowUnitBps = 1e6;

// Continuous 60 GHz AN->GN segment shared by both formulations: per-link
// (flow, bandwidth, power) triples, per-AN radio budgets, and lazy tangent
// cuts for the capacity coupling.
struct AnGnSubmodel {
  std::vector<core::DirectedLink> links;
  std::vector<int> f_col;
  std::vector<int> w_col;
  std::vector<int> p_col;
  std::vector<capacity::TangentGrid> grids;  // SI units
};

AnGnSubmodel add_an_gn_submodel(milp::MilpModel& model, const core::Topology& t,
                                int k_p, int k_w, double max_flow_mbps);

// Scaled tangent-cut row for one link: f <= cut in model coordinates.
milp::Row scaled_cut_row(const capacity::LinearCut& cut, int f_col, int p_col, int w_col,
                         double power_unit_w, double bw_unit_hz, bool lazy,
                         std::string name);

}  // namespace backhaul::form
