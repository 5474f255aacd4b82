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

#include "backhaul/io/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "backhaul/capacity/capacity.hpp"
#include "backhaul/core/topology.hpp"

namespace backhaul::io {
namespace {

using core::BandId;
using core::DeploymentPlan;
using core::LinkKey;
using core::NodeId;
using core::Topology;

constexpr double kRelTol = 1e-6;
constexpr double kAbsPowerTol = 1e-12;
constexpr double kAbsBwTol = 1e-3;   // Hz
constexpr double kAbsFlowTol = 1e-3; // bit/s

std::string link_str(const LinkKey& k) {
  return std::to_string(k.from) + "->" + std::to_string(k.to);
}

bool is_selected(const DeploymentPlan& plan, NodeId j) {
  return std::binary_search(plan.selected_ans.begin(), plan.selected_ans.end(), j);
}

bool is_infeasible_en(const DeploymentPlan& plan, NodeId i) {
  return std::find(plan.infeasible_ens.begin(), plan.infeasible_ens.end(), i) !=
         plan.infeasible_ens.end();
}

void check_flow_structure(const DeploymentPlan& plan, const Topology& t,
                          std::vector<std::string>& out) {
  // Flows only between live endpoints.
  for (const auto& [key, flow] : plan.flows) {
    if (flow < 0) out.push_back("negative flow on " + link_str(key));
    const core::Node& from = t.node(key.from);
    const core::Node& to = t.node(key.to);
    if (from.kind == core::NodeKind::Gateway)
      out.push_back("flow leaves gateway on " + link_str(key));
    if (from.kind == core::NodeKind::AggregatorCandidate && !is_selected(plan, key.from))
      out.push_back("flow from undeployed aggregator on " + link_str(key));
    if (to.kind == core::NodeKind::AggregatorCandidate && !is_selected(plan, key.to))
      out.push_back("flow into undeployed aggregator on " + link_str(key));
    if (to.kind == core::NodeKind::Edge)
      out.push_back("flow into edge node on " + link_str(key));
    if (from.kind == core::NodeKind::Edge && is_infeasible_en(plan, key.from))
      out.push_back("flow from infeasible edge node " + std::to_string(key.from));
  }

  // Every edge node either fully routed or declared infeasible.
  for (NodeId i : t.edge_nodes()) {
    double served = 0.0;
    for (const auto& [key, flow] : plan.flows)
      if (key.from == i) served += flow;
    const double d = t.node(i).demand_bps;
    if (is_infeasible_en(plan, i)) {
      if (served > kAbsFlowTol)
        out.push_back("infeasible edge node " + std::to_string(i) + " carries flow");
    } else if (std::abs(served - d) > kRelTol * d + kAbsFlowTol) {
      std::ostringstream os;
      os << "edge node " << i << " balance residual " << std::abs(served - d) << " bps";
      out.push_back(os.str());
    }
  }

  // Aggregator conservation.
  for (NodeId j : t.aggregator_candidates()) {
    double in = 0.0, outflow = 0.0;
    for (const auto& [key, flow] : plan.flows) {
      if (key.to == j) in += flow;
      if (key.from == j) outflow += flow;
    }
    if (std::abs(in - outflow) > kRelTol * std::max(in, outflow) + kAbsFlowTol)
      out.push_back("aggregator " + std::to_string(j) + " balance violated");
  }
}

void check_true_capacity_all(const DeploymentPlan& plan, const Topology& t, PlanMode mode,
                             BandId greedy_band, std::vector<std::string>& out) {
  for (const auto& [key, flow] : plan.flows) {
    if (flow <= 0) continue;
    const core::Node& from = t.node(key.from);
    double cap = 0.0;
    if (from.kind == core::NodeKind::AggregatorCandidate) {
      auto it = plan.an_gn_alloc.find(key);
      const auto gain = t.gains.get(BandId::MmWave, key.from, key.to);
      if (it != plan.an_gn_alloc.end() && gain.has_value()) {
        capacity::CapacityFn fn{*gain, t.mmwave.noise_spectral_density_w_per_hz};
        cap = capacity::capacity(fn, it->second.power_w, it->second.bandwidth_hz);
      }
    } else if (mode == PlanMode::Microwave) {
      auto it = plan.en_link_alloc.find(key);
      const auto gain = t.gains.get(BandId::Microwave, key.from, key.to);
      if (it != plan.en_link_alloc.end() && gain.has_value()) {
        capacity::CapacityFn fn{*gain, t.microwave.noise_spectral_density_w_per_hz};
        cap = capacity::capacity(fn, it->second.power_w, it->second.bandwidth_hz);
      }
    } else if (mode == PlanMode::Sub6) {
      auto it = plan.en_channel_alloc.find(key);
      if (it != plan.en_channel_alloc.end()) {
        for (const core::ChannelAlloc& c : it->second) {
          const auto gain = t.gains.get_channel(BandId::Sub6, key.from, key.to, c.channel);
          if (!gain.has_value()) continue;
          capacity::CapacityFn fn{*gain / t.capacity_gap_linear,
                                  t.sub6.noise_spectral_density_w_per_hz};
          cap += capacity::capacity(fn, c.power_w, t.sub6.channel_width_hz);
        }
      }
    } else {
      // Greedy assignment: full-power, full-bandwidth coverage capacity.
      const auto gain = t.gains.get(greedy_band, key.from, key.to);
      if (gain.has_value()) {
        const core::BandProfile& p = t.band(greedy_band);
        capacity::CapacityFn fn{*gain, p.noise_spectral_density_w_per_hz};
        cap = capacity::capacity(fn, p.max_power_per_radio_w, p.max_bandwidth_per_radio_hz);
      }
    }
    if (flow > cap + kRelTol * flow + kAbsFlowTol)
      out.push_back("flow exceeds true capacity on " + link_str(key));
  }
}

void check_microwave_budgets(const DeploymentPlan& plan, const Topology& t,
                             std::vector<std::string>& out) {
  const core::BandProfile& band = t.microwave;
  for (NodeId i : t.edge_nodes()) {
    double bw = 0.0, pw = 0.0;
    for (const auto& [key, alloc] : plan.en_link_alloc) {
      if (key.from != i) continue;
      bw += alloc.bandwidth_hz;
      pw += alloc.power_w;
    }
    if (bw > band.max_bandwidth_per_radio_hz * (1.0 + kRelTol) + kAbsBwTol)
      out.push_back("edge node " + std::to_string(i) + " bandwidth budget exceeded");
    if (pw > band.max_power_per_radio_w * (1.0 + kRelTol) + kAbsPowerTol)
      out.push_back("edge node " + std::to_string(i) + " power budget exceeded");
  }
  for (const core::Node& n : t.nodes) {
    if (n.kind == core::NodeKind::Edge) continue;
    double inbound = 0.0;
    for (const auto& [key, alloc] : plan.en_link_alloc)
      if (key.to == n.id) inbound += alloc.bandwidth_hz;
    double budget = n.max_radios * band.max_bandwidth_per_radio_hz;
    if (auto it = t.residual.find(n.id); it != t.residual.end())
      budget -= it->second.used_inbound_bw_hz;
    if (n.kind == core::NodeKind::AggregatorCandidate && !is_selected(plan, n.id))
      budget = 0.0;
    if (inbound > budget * (1.0 + kRelTol) + kAbsBwTol)
      out.push_back("node " + std::to_string(n.id) + " inbound bandwidth exceeded");
  }
  // 60 GHz per-AN budgets.
  for (NodeId j : t.aggregator_candidates()) {
    double bw = 0.0, pw = 0.0;
    for (const auto& [key, alloc] : plan.an_gn_alloc) {
      if (key.from != j) continue;
      bw += alloc.bandwidth_hz;
      pw += alloc.power_w;
    }
    if (bw > t.mmwave.max_bandwidth_per_radio_hz * (1.0 + kRelTol) + kAbsBwTol)
      out.push_back("aggregator " + std::to_string(j) + " 60 GHz bandwidth exceeded");
    if (pw > t.mmwave.max_power_per_radio_w * (1.0 + kRelTol) + kAbsPowerTol)
      out.push_back("aggregator " + std::to_string(j) + " 60 GHz power exceeded");
  }
}

void check_sub6_constraints(const DeploymentPlan& plan, const Topology& t,
                            std::vector<std::string>& out) {
  const core::BandProfile& band = t.sub6;
  const double p_max = band.max_power_per_radio_w;

  struct ActiveTx {
    NodeId from;
    NodeId to;
    int channel;
    double power_w;
  };
  std::vector<ActiveTx> active;
  for (const auto& [key, channels] : plan.en_channel_alloc) {
    for (const core::ChannelAlloc& c : channels) {
      if (c.power_w <= 0) continue;
      if (c.channel < 0 || c.channel >= band.num_channels)
        out.push_back("channel index out of range on " + link_str(key));
      if (c.power_w > p_max * (1.0 + kRelTol) + kAbsPowerTol)
        out.push_back("per-channel power exceeded on " + link_str(key));
      active.push_back({key.from, key.to, c.channel, c.power_w});
    }
  }

  // SDMA order per receiver and channel.
  std::map<std::pair<NodeId, int>, int> sdma;
  for (const ActiveTx& a : active) sdma[{a.to, a.channel}]++;
  for (const auto& [rc, count] : sdma) {
    int used = 0;
    if (auto it = t.residual.find(rc.first); it != t.residual.end()) {
      auto uu = it->second.used_sdma_slots.find(rc.second);
      if (uu != it->second.used_sdma_slots.end()) used = uu->second;
    }
    if (count + used > t.sdma_order)
      out.push_back("SDMA order exceeded at node " + std::to_string(rc.first) +
                    " channel " + std::to_string(rc.second));
  }
  // Schedule-deployment coupling.
  for (const ActiveTx& a : active) {
    const core::Node& recv = t.node(a.to);
    if (recv.kind == core::NodeKind::AggregatorCandidate && !is_selected(plan, a.to))
      out.push_back("channel active into undeployed aggregator " + std::to_string(a.to));
  }
  // Radio limits: channel-link count at ENs, distinct channels at receivers.
  for (NodeId i : t.edge_nodes()) {
    int used = 0;
    for (const ActiveTx& a : active)
      if (a.from == i) ++used;
    if (used > t.node(i).max_radios)
      out.push_back("edge node " + std::to_string(i) + " radio limit exceeded");
  }
  for (const core::Node& n : t.nodes) {
    if (n.kind == core::NodeKind::Edge) continue;
    std::set<int> channels;
    for (const ActiveTx& a : active)
      if (a.to == n.id) channels.insert(a.channel);
    int already = 0;
    if (auto it = t.residual.find(n.id); it != t.residual.end()) {
      for (int m : it->second.used_channels)
        if (channels.count(m) == 0) ++already;
    }
    if (static_cast<int>(channels.size()) + already > n.max_radios)
      out.push_back("node " + std::to_string(n.id) + " channel-radio limit exceeded");
  }

  // Protocol interference, recomputed from gains over all ordered pairs of
  // distinct co-channel links with distinct transmitter and receiver.
  for (const ActiveTx& victim : active) {
    for (const ActiveTx& other : active) {
      if (other.channel != victim.channel) continue;
      if (other.from == victim.from || other.to == victim.to) continue;
      const auto g = t.gains.get_channel(BandId::Sub6, other.from, victim.to,
                                         victim.channel);
      if (!g.has_value() || *g < t.gain_floor) continue;
      const double received = other.power_w * *g;
      if (received > t.interference_threshold_w * (1.0 + kRelTol) + 1e-24)
        out.push_back("interference threshold exceeded at node " +
                      std::to_string(victim.to) + " channel " +
                      std::to_string(victim.channel) + " from " +
                      std::to_string(other.from));
    }
  }
}

void check_greedy(const DeploymentPlan& plan, const Topology& t,
                  std::vector<std::string>& out) {
  for (NodeId i : t.edge_nodes()) {
    int centers = 0;
    for (const auto& [key, flow] : plan.flows)
      if (key.from == i && flow > 0) ++centers;
    if (is_infeasible_en(plan, i)) {
      if (centers != 0)
        out.push_back("uncovered edge node " + std::to_string(i) + " has a center");
    } else if (centers != 1) {
      out.push_back("edge node " + std::to_string(i) + " assigned to " +
                    std::to_string(centers) + " centers");
    }
  }
}

}  // namespace

std::vector<std::string> verify_plan(const DeploymentPlan& plan, const Topology& t,
                                     PlanMode mode, core::BandId greedy_band) {
  std::vector<std::string> out;
  if (mode == PlanMode::Greedy) {
    check_greedy(plan, t, out);
    check_true_capacity_all(plan, t, mode, greedy_band, out);
    return out;
  }
  check_flow_structure(plan, t, out);
  check_true_capacity_all(plan, t, mode, greedy_band, out);
  if (mode == PlanMode::Microwave) {
    check_microwave_budgets(plan, t, out);
  } else {
    check_sub6_constraints(plan, t, out);
    // The 60 GHz leg budgets apply in both modes.
    for (NodeId j : t.aggregator_candidates()) {
      double bw = 0.0, pw = 0.0;
      for (const auto& [key, alloc] : plan.an_gn_alloc) {
        if (key.from != j) continue;
        bw += alloc.bandwidth_hz;
        pw += alloc.power_w;
      }
      if (bw > t.mmwave.max_bandwidth_per_radio_hz * (1.0 + kRelTol) + kAbsBwTol)
        out.push_back("aggregator " + std::to_string(j) + " 60 GHz bandwidth exceeded");
      if (pw > t.mmwave.max_power_per_radio_w * (1.0 + kRelTol) + kAbsPowerTol)
        out.push_back("aggregator " + std::to_string(j) + " 60 GHz power exceeded");
    }
  }
  return out;
}

}  // namespace backhaul::io
