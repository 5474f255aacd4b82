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

#include "backhaul/formulations/microwave.hpp"

#include <algorithm>
#include <stdexcept>

namespace backhaul::form {

MicrowaveFormulation build_microwave(const core::Topology& t, int k_p, int k_w) {
  MicrowaveFormulation f;
  f.k_p = k_p;
  f.k_w = k_w;
  const core::BandProfile& band = t.microwave;

  double total_demand_mbps = 0.0;
  for (core::NodeId i : t.edge_nodes()) total_demand_mbps += t.node(i).demand_bps / kFlowUnitBps;

  // Deployment binaries, branched before everything else.
  f.an_ids = t.aggregator_candidates();
  for (core::NodeId j : f.an_ids) {
    const int col = f.model.add_var({"y", j}, milp::VarKind::Binary, 0.0, 1.0, 10);
    f.y_col[j] = col;
    f.model.set_objective(col, t.node(j).deploy_cost);
  }

  const std::vector<core::DirectedLink> adjacency =
      core::uplink_adjacency(t, core::BandId::Microwave);
  for (core::NodeId i : t.edge_nodes()) {
    const bool has_any = std::any_of(adjacency.begin(), adjacency.end(),
                                     [&](const core::DirectedLink& l) { return l.from == i; });
    if (!has_any) f.structurally_infeasible.push_back(i);
  }

  for (const core::DirectedLink& link : adjacency) {
    const double demand_mbps = t.node(link.from).demand_bps / kFlowUnitBps;
    f.en_links.push_back(link);
    f.en_f.push_back(f.model.add_var({"f28", link.from, link.to},
                                     milp::VarKind::Continuous, 0.0, demand_mbps));
    f.en_w.push_back(f.model.add_var({"w28", link.from, link.to},
                                     milp::VarKind::Continuous, 0.0, 1.0));
    f.en_p.push_back(f.model.add_var({"p28", link.from, link.to},
                                     milp::VarKind::Continuous, 0.0, 1.0));
    const double gain = *t.gains.get(core::BandId::Microwave, link.from, link.to);
    capacity::CapacityFn fn{gain, band.noise_spectral_density_w_per_hz};
    f.en_grids.push_back(capacity::build_tangent_grid(
        fn, band.max_power_per_radio_w, band.max_bandwidth_per_radio_hz, k_p, k_w));
  }

  f.angn = add_an_gn_submodel(f.model, t, k_p, k_w, total_demand_mbps);

  // EN flow balance: all outgoing flow equals the demand.
  for (core::NodeId i : t.edge_nodes()) {
    if (std::find(f.structurally_infeasible.begin(), f.structurally_infeasible.end(), i) !=
        f.structurally_infeasible.end())
      continue;
    milp::Row row;
    row.sense = milp::RowSense::Equal;
    row.rhs = t.node(i).demand_bps / kFlowUnitBps;
    row.name = "en_balance_" + std::to_string(i);
    for (std::size_t l = 0; l < f.en_links.size(); ++l)
      if (f.en_links[l].from == i) row.terms.push_back({f.en_f[l], 1.0});
    f.model.add_row(row);
  }

  // AN flow balance: 28 GHz in equals 60 GHz out.
  for (core::NodeId j : f.an_ids) {
    milp::Row row;
    row.sense = milp::RowSense::Equal;
    row.rhs = 0.0;
    row.name = "an_balance_" + std::to_string(j);
    for (std::size_t l = 0; l < f.en_links.size(); ++l)
      if (f.en_links[l].to == j) row.terms.push_back({f.en_f[l], 1.0});
    for (std::size_t l = 0; l < f.angn.links.size(); ++l)
      if (f.angn.links[l].from == j) row.terms.push_back({f.angn.f_col[l], -1.0});
    if (!row.terms.empty()) f.model.add_row(row);
  }

  // EN single-radio budgets.
  for (core::NodeId i : t.edge_nodes()) {
    milp::Row wrow, prow;
    wrow.sense = prow.sense = milp::RowSense::LessEqual;
    wrow.rhs = prow.rhs = 1.0;
    wrow.name = "en_bw_" + std::to_string(i);
    prow.name = "en_pw_" + std::to_string(i);
    for (std::size_t l = 0; l < f.en_links.size(); ++l) {
      if (f.en_links[l].from != i) continue;
      wrow.terms.push_back({f.en_w[l], 1.0});
      prow.terms.push_back({f.en_p[l], 1.0});
    }
    if (!wrow.terms.empty()) {
      f.model.add_row(wrow);
      f.model.add_row(prow);
    }
  }

  // Inbound bandwidth: couples deployment at ANs, plain radio cap at GNs.
  for (core::NodeId j : f.an_ids) {
    milp::Row row;
    row.sense = milp::RowSense::LessEqual;
    row.rhs = 0.0;
    row.name = "an_inbw_" + std::to_string(j);
    for (std::size_t l = 0; l < f.en_links.size(); ++l)
      if (f.en_links[l].to == j) row.terms.push_back({f.en_w[l], 1.0});
    if (row.terms.empty()) continue;
    row.terms.push_back({f.y_col[j], -static_cast<double>(t.node(j).max_radios)});
    f.model.add_row(row);
  }
  for (core::NodeId k : t.gateways()) {
    milp::Row row;
    row.sense = milp::RowSense::LessEqual;
    double rhs = static_cast<double>(t.node(k).max_radios);
    if (auto it = t.residual.find(k); it != t.residual.end())
      rhs -= it->second.used_inbound_bw_hz / band.max_bandwidth_per_radio_hz;
    row.rhs = rhs;
    row.name = "gn_inbw_" + std::to_string(k);
    for (std::size_t l = 0; l < f.en_links.size(); ++l)
      if (f.en_links[l].to == k) row.terms.push_back({f.en_w[l], 1.0});
    if (!row.terms.empty()) f.model.add_row(row);
  }

  // Tangent cuts for the 28 GHz links (lazy pool).
  for (std::size_t l = 0; l < f.en_links.size(); ++l) {
    const auto cuts = capacity::emit_cuts(f.en_grids[l]);
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      f.model.add_row(scaled_cut_row(
          cuts[c], f.en_f[l], f.en_p[l], f.en_w[l], band.max_power_per_radio_w,
          band.max_bandwidth_per_radio_hz, true,
          "cut28_" + std::to_string(f.en_links[l].from) + "_" +
              std::to_string(f.en_links[l].to) + "_" + std::to_string(c)));
    }
  }

  return f;
}

core::DeploymentPlan extract_plan(const milp::BnbResult& sol,
                                  const MicrowaveFormulation& f,
                                  const core::Topology& t) {
  if (!sol.incumbent.has_value())
    throw std::runtime_error("extract_plan: no incumbent");
  const std::vector<double>& x = *sol.incumbent;
  constexpr double kZero = 1e-9;

  core::DeploymentPlan plan;
  plan.objective = sol.objective;
  plan.lower_bound = sol.lower_bound;
  plan.gap = sol.gap;
  plan.infeasible_ens = f.structurally_infeasible;

  for (core::NodeId j : f.an_ids) {
    const double v = x[static_cast<std::size_t>(f.y_col.at(j))];
    if (v > 0.5) plan.selected_ans.push_back(j);
  }
  std::sort(plan.selected_ans.begin(), plan.selected_ans.end());

  const double pu = t.microwave.max_power_per_radio_w;
  const double wu = t.microwave.max_bandwidth_per_radio_hz;
  for (std::size_t l = 0; l < f.en_links.size(); ++l) {
    const core::LinkKey key{f.en_links[l].from, f.en_links[l].to};
    const double flow = x[static_cast<std::size_t>(f.en_f[l])];
    const double bw = x[static_cast<std::size_t>(f.en_w[l])];
    const double pw = x[static_cast<std::size_t>(f.en_p[l])];
    if (flow > kZero) plan.flows[key] = flow * kFlowUnitBps;
    if (bw > kZero || pw > kZero)
      plan.en_link_alloc[key] =
          core::LinkAlloc{bw > kZero ? bw * wu : 0.0, pw > kZero ? pw * pu : 0.0};
  }
  const double pu60 = t.mmwave.max_power_per_radio_w;
  const double wu60 = t.mmwave.max_bandwidth_per_radio_hz;
  for (std::size_t l = 0; l < f.angn.links.size(); ++l) {
    const core::LinkKey key{f.angn.links[l].from, f.angn.links[l].to};
    const double flow = x[static_cast<std::size_t>(f.angn.f_col[l])];
    const double bw = x[static_cast<std::size_t>(f.angn.w_col[l])];
    const double pw = x[static_cast<std::size_t>(f.angn.p_col[l])];
    if (flow > kZero) plan.flows[key] = flow * kFlowUnitBps;
    if (bw > kZero || pw > kZero)
      plan.an_gn_alloc[key] =
          core::LinkAlloc{bw > kZero ? bw * wu60 : 0.0, pw > kZero ? pw * pu60 : 0.0};
  }
  return plan;
}

}  // namespace backhaul::form
