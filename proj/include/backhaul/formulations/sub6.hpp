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

// Channelized 5.8 GHz access with per-channel scheduling binaries, power
// control under the protocol interference model, SDMA order A at receivers,
// radio limits, plus the shared 60 GHz AN->GN segment.
struct Sub6Formulation {
  milp::MilpModel model;
  int k_p = 0;     // power points per channel-cut family
  int k_p60 = 0;   // 60 GHz grid
  int k_w60 = 0;

  std::vector<core::NodeId> an_ids;
  std::map<core::NodeId, int> y_col;

  std::vector<core::DirectedLink> en_links;  // 5.8 GHz EN -> {AN, GN}
  std::vector<int> en_f;                     // per link
  int num_channels = 0;
  std::vector<std::vector<int>> x_col;  // [link][channel]
  std::vector<std::vector<int>> p_col;
  std::vector<std::vector<int>> c_col;  // auxiliary per-channel capacity
  std::vector<std::vector<double>> chan_cap_max_mbps;  // [link][channel]
  std::map<std::pair<core::NodeId, int>, int> node_channel_col;  // x_j^m

  AnGnSubmodel angn;

  std::vector<core::NodeId> structurally_infeasible;
};

Sub6Formulation build_sub6(const core::Topology& t, int k_p, int k_p60, int k_w60);

core::DeploymentPlan extract_plan(const milp::BnbResult& sol, const Sub6Formulation& f,
                                  const core::Topology& t);

}  // namespace backhaul::form
