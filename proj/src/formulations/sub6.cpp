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

#include "backhaul/formulations/sub6.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace backhaul::form {
namespace {

std::vector<double> geometric_points(double maximum, int k) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    pts.push_back(maximum / std::exp2(static_cast<double>(k - 1 - i)));
  return pts;
}

}  // namespace

Sub6Formulation build_sub6(const core::Topology& t, int k_p, int k_p60, int k_w60) {
  Sub6Formulation f;
  f.k_p = k_p;
  f.k_p60 = k_p60;
  f.k_w60 = k_w60;
  const core::BandProfile& band = t.sub6;
  f.num_channels = band.num_channels;
  const double p_max = band.max_power_per_radio_w;
  const double chan_w = band.channel_width_hz;

  double total_demand_mbps = 0.0;
  for (core::NodeId i : t.edge_nodes()) total_demand_mbps += t.node(i).demand_bps / kFlowUnitBps;

  f.an_ids = t.aggregator_candidates();
  for (core::NodeId j : f.an_ids) {
    const int col = f.model.add_var({"y", j}, milp::VarKind::Binary, 0.0, 1.0, 10);
    f.y_col[j] = col;
    f.model.set_objective(col, t.node(j).deploy_cost);
  }

  const std::vector<core::DirectedLink> adjacency =
      core::uplink_adjacency(t, core::BandId::Sub6);
  for (core::NodeId i : t.edge_nodes()) {
    const bool has_any = std::any_of(adjacency.begin(), adjacency.end(),
                                     [&](const core::DirectedLink& l) { return l.from == i; });
    if (!has_any) f.structurally_infeasible.push_back(i);
  }

  const std::vector<double> power_points = geometric_points(p_max, k_p);

  // Link variables: flow plus per-channel schedule/power/capacity triples.
  for (const core::DirectedLink& link : adjacency) {
    const double demand_mbps = t.node(link.from).demand_bps / kFlowUnitBps;
    f.en_links.push_back(link);
    f.en_f.push_back(f.model.add_var({"f58", link.from, link.to},
                                     milp::VarKind::Continuous, 0.0, demand_mbps));
    std::vector<int> xs, ps, cs;
    std::vector<double> caps;
    for (int m = 0; m < f.num_channels; ++m) {
      const double gain =
          t.gains.get_channel(core::BandId::Sub6, link.from, link.to, m).value_or(0.0);
      // SDMA interference suppression shortfall enters as a gap to capacity.
      capacity::CapacityFn fn{gain / t.capacity_gap_linear,
                              band.noise_spectral_density_w_per_hz};
      const double cap_max_mbps = capacity::capacity(fn, p_max, chan_w) / kFlowUnitBps;
      caps.push_back(cap_max_mbps);

      // Residual rounds: a receiver already hearing accepted interference
      // above threshold on channel m cannot admit a new link there.
      double x_hi = 1.0;
      if (auto it = t.residual.find(link.to); it != t.residual.end()) {
        auto ii = it->second.inbound_interference_w.find(m);
        if (ii != it->second.inbound_interference_w.end() &&
            ii->second > t.interference_threshold_w)
          x_hi = 0.0;
      }
      xs.push_back(f.model.add_var({"x58", link.from, link.to, m}, milp::VarKind::Binary,
                                   0.0, x_hi, 2));
      ps.push_back(f.model.add_var({"p58", link.from, link.to, m},
                                   milp::VarKind::Continuous, 0.0, 1.0));
      cs.push_back(f.model.add_var({"c58", link.from, link.to, m},
                                   milp::VarKind::Continuous, 0.0, cap_max_mbps));
    }
    f.x_col.push_back(std::move(xs));
    f.p_col.push_back(std::move(ps));
    f.c_col.push_back(std::move(cs));
    f.chan_cap_max_mbps.push_back(std::move(caps));
  }

  // Node-channel binaries for ANs and GNs.
  for (const core::Node& n : t.nodes) {
    if (n.kind == core::NodeKind::Edge) continue;
    for (int m = 0; m < f.num_channels; ++m) {
      f.node_channel_col[{n.id, m}] =
          f.model.add_var({"xn", n.id, m}, milp::VarKind::Binary, 0.0, 1.0, 1);
    }
  }

  f.angn = add_an_gn_submodel(f.model, t, k_p60, k_w60, total_demand_mbps);

  // Flow balances.
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

  // Per-link flow bound through the per-channel capacity variables, the
  // channel cuts, and the schedule gate.
  for (std::size_t l = 0; l < f.en_links.size(); ++l) {
    milp::Row fb;
    fb.sense = milp::RowSense::LessEqual;
    fb.rhs = 0.0;
    fb.name = "flow_cap_" + std::to_string(f.en_links[l].from) + "_" +
              std::to_string(f.en_links[l].to);
    fb.terms.push_back({f.en_f[l], 1.0});
    for (int m = 0; m < f.num_channels; ++m) fb.terms.push_back({f.c_col[l][m], -1.0});
    f.model.add_row(fb);

    for (int m = 0; m < f.num_channels; ++m) {
      const double gain =
          t.gains.get_channel(core::BandId::Sub6, f.en_links[l].from, f.en_links[l].to, m)
              .value_or(0.0);
      capacity::CapacityFn fn{gain / t.capacity_gap_linear,
                              band.noise_spectral_density_w_per_hz};
      const auto cuts = capacity::emit_cuts_fixed_bandwidth(fn, chan_w, power_points);
      for (std::size_t cix = 0; cix < cuts.size(); ++cix) {
        f.model.add_row(scaled_cut_row(
            cuts[cix], f.c_col[l][m], f.p_col[l][m], -1, p_max, chan_w, true,
            "cut58_" + std::to_string(f.en_links[l].from) + "_" +
                std::to_string(f.en_links[l].to) + "_c" + std::to_string(m) + "_" +
                std::to_string(cix)));
      }
      milp::Row gate;
      gate.sense = milp::RowSense::LessEqual;
      gate.rhs = 0.0;
      gate.name = "gate_" + std::to_string(f.en_links[l].from) + "_" +
                  std::to_string(f.en_links[l].to) + "_c" + std::to_string(m);
      gate.terms.push_back({f.c_col[l][m], 1.0});
      gate.terms.push_back({f.x_col[l][m], -f.chan_cap_max_mbps[l][m]});
      f.model.add_row(gate);

      milp::Row couple;
      couple.sense = milp::RowSense::LessEqual;
      couple.rhs = 0.0;
      couple.name = "pwx_" + std::to_string(f.en_links[l].from) + "_" +
                    std::to_string(f.en_links[l].to) + "_c" + std::to_string(m);
      couple.terms.push_back({f.p_col[l][m], 1.0});
      couple.terms.push_back({f.x_col[l][m], -1.0});
      f.model.add_row(couple);

      milp::Row ln;
      ln.sense = milp::RowSense::LessEqual;
      ln.rhs = 0.0;
      ln.name = "xnode_" + std::to_string(f.en_links[l].from) + "_" +
                std::to_string(f.en_links[l].to) + "_c" + std::to_string(m);
      ln.terms.push_back({f.x_col[l][m], 1.0});
      ln.terms.push_back({f.node_channel_col.at({f.en_links[l].to, m}), -1.0});
      f.model.add_row(ln);
    }
  }

  // Protocol interference: a scheduled victim link caps every other
  // transmitter whose signal reaches its receiver.
  for (std::size_t lv = 0; lv < f.en_links.size(); ++lv) {
    const core::NodeId i = f.en_links[lv].from;
    const core::NodeId j = f.en_links[lv].to;
    for (std::size_t li = 0; li < f.en_links.size(); ++li) {
      if (li == lv) continue;
      const core::NodeId k = f.en_links[li].from;
      const core::NodeId h = f.en_links[li].to;
      if (k == i || h == j) continue;
      for (int m = 0; m < f.num_channels; ++m) {
        const auto g_kj = t.gains.get_channel(core::BandId::Sub6, k, j, m);
        if (!g_kj.has_value() || *g_kj < t.gain_floor) continue;
        // p_kh + (p_max - P_I/g) x_ij <= p_max, scaled by p_max; the
        // coefficient is clamped at 0 when the row can never bind.
        const double coeff =
            std::max(0.0, 1.0 - t.interference_threshold_w / (*g_kj * p_max));
        milp::Row row;
        row.sense = milp::RowSense::LessEqual;
        row.rhs = 1.0;
        row.lazy = true;
        row.name = "pi_" + std::to_string(k) + "_" + std::to_string(h) + "_v" +
                   std::to_string(i) + "_" + std::to_string(j) + "_c" + std::to_string(m);
        row.terms.push_back({f.p_col[li][m], 1.0});
        row.terms.push_back({f.x_col[lv][m], coeff});
        f.model.add_row(row);
      }
    }
  }

  // Residual rounds: protect accepted receptions from new transmitters.
  for (std::size_t l = 0; l < f.en_links.size(); ++l) {
    const core::NodeId k = f.en_links[l].from;
    const core::NodeId h = f.en_links[l].to;
    auto it = t.residual.find(k);
    if (it == t.residual.end()) continue;
    for (const auto& [m, caps] : it->second.tx_power_caps_w) {
      if (m >= f.num_channels) continue;
      double cap = p_max;
      for (const auto& [receiver, cap_w] : caps) {
        if (receiver == h) continue;  // joining that receiver is co-scheduling
        cap = std::min(cap, cap_w);
      }
      if (cap >= p_max) continue;
      milp::Row row;
      row.sense = milp::RowSense::LessEqual;
      row.rhs = 1.0;
      row.lazy = true;
      row.name = "pires_" + std::to_string(k) + "_" + std::to_string(h) + "_c" +
                 std::to_string(m);
      row.terms.push_back({f.p_col[l][m], 1.0});
      row.terms.push_back({f.x_col[l][m], 1.0 - std::max(0.0, cap) / p_max});
      f.model.add_row(row);
    }
  }

  // SDMA order at receivers; deployment coupling at ANs.
  for (const core::Node& n : t.nodes) {
    if (n.kind == core::NodeKind::Edge) continue;
    for (int m = 0; m < f.num_channels; ++m) {
      milp::Row row;
      row.sense = milp::RowSense::LessEqual;
      row.name = "sdma_" + std::to_string(n.id) + "_c" + std::to_string(m);
      for (std::size_t l = 0; l < f.en_links.size(); ++l)
        if (f.en_links[l].to == n.id) row.terms.push_back({f.x_col[l][m], 1.0});
      if (row.terms.empty()) continue;
      if (n.kind == core::NodeKind::AggregatorCandidate) {
        row.rhs = 0.0;
        row.terms.push_back({f.y_col[n.id], -static_cast<double>(t.sdma_order)});
      } else {
        int used = 0;
        if (auto it = t.residual.find(n.id); it != t.residual.end()) {
          auto uu = it->second.used_sdma_slots.find(m);
          if (uu != it->second.used_sdma_slots.end()) used = uu->second;
        }
        row.rhs = std::max(0, t.sdma_order - used);
      }
      f.model.add_row(row);
    }
  }

  // Radio limits: channels per EN, distinct channels per AN/GN.
  for (core::NodeId i : t.edge_nodes()) {
    milp::Row row;
    row.sense = milp::RowSense::LessEqual;
    row.rhs = static_cast<double>(t.node(i).max_radios);
    row.name = "en_radio_" + std::to_string(i);
    for (std::size_t l = 0; l < f.en_links.size(); ++l) {
      if (f.en_links[l].from != i) continue;
      for (int m = 0; m < f.num_channels; ++m) row.terms.push_back({f.x_col[l][m], 1.0});
    }
    if (!row.terms.empty()) f.model.add_row(row);
  }
  for (const core::Node& n : t.nodes) {
    if (n.kind == core::NodeKind::Edge) continue;
    milp::Row row;
    row.sense = milp::RowSense::LessEqual;
    double rhs = static_cast<double>(n.max_radios);
    const core::ResidualBudget* res = nullptr;
    if (auto it = t.residual.find(n.id); it != t.residual.end()) res = &it->second;
    for (int m = 0; m < f.num_channels; ++m) {
      const bool already_on =
          res != nullptr && std::find(res->used_channels.begin(), res->used_channels.end(),
                                      m) != res->used_channels.end();
      if (already_on) {
        rhs -= 0.0;  // radio exists; reusing the channel is free
        continue;
      }
      row.terms.push_back({f.node_channel_col.at({n.id, m}), 1.0});
    }
    if (res != nullptr) rhs -= static_cast<double>(res->used_channels.size());
    row.rhs = std::max(0.0, rhs);
    row.name = "node_radio_" + std::to_string(n.id);
    if (!row.terms.empty()) f.model.add_row(row);
  }

  return f;
}

core::DeploymentPlan extract_plan(const milp::BnbResult& sol, const Sub6Formulation& f,
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

  const double p_max = t.sub6.max_power_per_radio_w;
  for (std::size_t l = 0; l < f.en_links.size(); ++l) {
    const core::LinkKey key{f.en_links[l].from, f.en_links[l].to};
    const double flow = x[static_cast<std::size_t>(f.en_f[l])];
    if (flow > kZero) plan.flows[key] = flow * kFlowUnitBps;
    std::vector<core::ChannelAlloc> channels;
    for (int m = 0; m < f.num_channels; ++m) {
      const double p = x[static_cast<std::size_t>(f.p_col[l][m])];
      if (p > kZero) channels.push_back(core::ChannelAlloc{m, p * p_max});
    }
    if (!channels.empty()) plan.en_channel_alloc[key] = std::move(channels);
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
