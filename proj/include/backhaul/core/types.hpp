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

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace backhaul::core {

// Dense node index, 0..N-1 within one topology.
using NodeId = std::int32_t;

enum class NodeKind { Edge, AggregatorCandidate, Gateway };

enum class BandId { Sub6, Microwave, MmWave };

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Node {
  NodeId id = -1;
  NodeKind kind = NodeKind::Edge;
  double demand_bps = 0.0;    // edge nodes only
  double deploy_cost = 0.0;   // aggregator candidates only
  int max_radios = 1;
  std::optional<Vec3> position;
};

// Per-band physical parameters. All linear/SI internally; dB inputs are
// converted once at ingestion.
struct BandProfile {
  BandId band_id = BandId::Sub6;
  double channel_width_hz = 0.0;
  int num_channels = 0;
  double max_power_per_radio_w = 0.0;
  double max_bandwidth_per_radio_hz = 0.0;
  double antenna_gain_linear = 1.0;
  double rain_attenuation_db = 0.0;
  double oxygen_absorption_db = 0.0;
  double fading_margin_db = 0.0;
  double noise_spectral_density_w_per_hz = 0.0;
};

// Directed linear power gains per band; absent entry means "no usable
// link". Sub-6 entries may carry per-channel overrides.
class LinkGainTable {
 public:
  void set(BandId band, NodeId from, NodeId to, double gain);
  void set_channel(BandId band, NodeId from, NodeId to, int channel, double gain);

  // Base gain; nullopt when absent.
  std::optional<double> get(BandId band, NodeId from, NodeId to) const;
  // Per-channel gain, falling back to the base entry.
  std::optional<double> get_channel(BandId band, NodeId from, NodeId to, int channel) const;
  bool has(BandId band, NodeId from, NodeId to) const;

  // Deterministic iteration over base entries of one band.
  struct Entry {
    NodeId from;
    NodeId to;
    double gain;
  };
  std::vector<Entry> entries(BandId band) const;
  struct ChannelEntry {
    NodeId from;
    NodeId to;
    int channel;
    double gain;
  };
  std::vector<ChannelEntry> channel_entries(BandId band) const;

 private:
  static std::uint64_t key(NodeId from, NodeId to);
  struct BandTable {
    std::map<std::uint64_t, double> base;
    std::map<std::uint64_t, std::map<int, double>> per_channel;
  };
  const BandTable& table(BandId band) const;
  BandTable& table(BandId band);
  BandTable sub6_, microwave_, mmwave_;
};

// Capacity already consumed at a node by an accepted partial plan; used by
// the repair loop when re-running on the residual topology.
struct ResidualBudget {
  double used_inbound_bw_hz = 0.0;     // EN-band inbound bandwidth (microwave mode)
  std::vector<int> used_channels;       // sub-6 channels with a live radio here
  std::map<int, int> used_sdma_slots;   // channel -> accepted co-scheduled EN count
  // Receiver side: interference already arriving from accepted transmitters,
  // per channel; above P_I the channel cannot admit a new link here.
  std::map<int, double> inbound_interference_w;
  // Transmitter side (edge nodes): per channel, accepted receptions this
  // node must not disturb as (receiver id or -1 when the receiver left the
  // residual topology, max transmit power in W).
  std::map<int, std::vector<std::pair<NodeId, double>>> tx_power_caps_w;
};

struct Topology {
  std::vector<Node> nodes;
  LinkGainTable gains;
  BandProfile sub6;
  BandProfile microwave;
  BandProfile mmwave;
  int sdma_order = 1;                    // A
  double interference_threshold_w = 0.0; // P_I
  double capacity_gap_linear = 1.0;      // Gamma >= 1, divides SNR (sub-6 SDMA)
  double gain_floor = 1e-30;             // below this, a gain entry is "no link"
  std::map<NodeId, ResidualBudget> residual;  // empty except in repair rounds

  const BandProfile& band(BandId b) const;
  const Node& node(NodeId id) const { return nodes.at(static_cast<std::size_t>(id)); }
  std::vector<NodeId> edge_nodes() const;
  std::vector<NodeId> aggregator_candidates() const;
  std::vector<NodeId> gateways() const;
};

struct LinkKey {
  NodeId from = -1;
  NodeId to = -1;
  auto operator<=>(const LinkKey&) const = default;
};

// Continuous allocation on one link (microwave-style sharing).
struct LinkAlloc {
  double bandwidth_hz = 0.0;
  double power_w = 0.0;
};

struct ChannelAlloc {
  int channel = 0;
  double power_w = 0.0;
};

struct DeploymentPlan {
  std::vector<NodeId> selected_ans;                 // sorted
  std::map<LinkKey, double> flows;                  // bits/s
  std::map<LinkKey, LinkAlloc> en_link_alloc;       // EN band, microwave mode
  std::map<LinkKey, std::vector<ChannelAlloc>> en_channel_alloc;  // EN band, sub-6 mode
  std::map<LinkKey, LinkAlloc> an_gn_alloc;         // 60 GHz
  double objective = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  std::vector<NodeId> infeasible_ens;               // sorted
};

}  // namespace backhaul::core
