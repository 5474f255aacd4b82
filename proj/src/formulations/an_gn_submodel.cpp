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

#include "backhaul/formulations/an_gn_submodel.hpp"

namespace backhaul::form {

milp::Row scaled_cut_row(const capacity::LinearCut& cut, int f_col, int p_col, int w_col,
                         double power_unit_w, double bw_unit_hz, bool lazy,
                         std::string name) {
  milp::Row row;
  row.name = std::move(name);
  row.sense = milp::RowSense::LessEqual;
  row.lazy = lazy;
  row.terms.push_back({f_col, cut.coef_f});
  row.terms.push_back({p_col, cut.coef_p * power_unit_w / kFlowUnitBps});
  if (w_col >= 0 && cut.coef_w != 0.0)
    row.terms.push_back({w_col, cut.coef_w * bw_unit_hz / kFlowUnitBps});
  row.rhs = cut.rhs / kFlowUnitBps;
  return row;
}

AnGnSubmodel add_an_gn_submodel(milp::MilpModel& model, const core::Topology& t,
                                int k_p, int k_w, double max_flow_mbps) {
  AnGnSubmodel sub;
  const core::BandProfile& band = t.mmwave;
  sub.links = core::uplink_adjacency(t, core::BandId::MmWave);

  for (const core::DirectedLink& link : sub.links) {
    const int f = model.add_var({"f60", link.from, link.to}, milp::VarKind::Continuous,
                                0.0, max_flow_mbps);
    const int w = model.add_var({"w60", link.from, link.to}, milp::VarKind::Continuous,
                                0.0, 1.0);
    const int p = model.add_var({"p60", link.from, link.to}, milp::VarKind::Continuous,
                                0.0, 1.0);
    sub.f_col.push_back(f);
    sub.w_col.push_back(w);
    sub.p_col.push_back(p);
    const double gain = *t.gains.get(core::BandId::MmWave, link.from, link.to);
    capacity::CapacityFn fn{gain, band.noise_spectral_density_w_per_hz};
    sub.grids.push_back(capacity::build_tangent_grid(
        fn, band.max_power_per_radio_w, band.max_bandwidth_per_radio_hz, k_p, k_w));
  }

  // Per-AN 60 GHz single-radio budgets.
  for (core::NodeId j : t.aggregator_candidates()) {
    milp::Row wrow, prow;
    wrow.sense = prow.sense = milp::RowSense::LessEqual;
    wrow.rhs = prow.rhs = 1.0;
    wrow.name = "an60_bw_" + std::to_string(j);
    prow.name = "an60_pw_" + std::to_string(j);
    for (std::size_t l = 0; l < sub.links.size(); ++l) {
      if (sub.links[l].from != j) continue;
      wrow.terms.push_back({sub.w_col[l], 1.0});
      prow.terms.push_back({sub.p_col[l], 1.0});
    }
    if (!wrow.terms.empty()) {
      model.add_row(wrow);
      model.add_row(prow);
    }
  }

  for (std::size_t l = 0; l < sub.links.size(); ++l) {
    const auto cuts = capacity::emit_cuts(sub.grids[l]);
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      model.add_row(scaled_cut_row(
          cuts[c], sub.f_col[l], sub.p_col[l], sub.w_col[l], band.max_power_per_radio_w,
          band.max_bandwidth_per_radio_hz, true,
          "cut60_" + std::to_string(sub.links[l].from) + "_" +
              std::to_string(sub.links[l].to) + "_" + std::to_string(c)));
    }
  }
  return sub;
}

}  // namespace backhaul::form
