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

#include "backhaul/core/topology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace backhaul::core {

std::uint64_t LinkGainTable::key(NodeId from, NodeId to) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
         static_cast<std::uint32_t>(to);
}

const LinkGainTable::BandTable& LinkGainTable::table(BandId band) const {
  switch (band) {
    case BandId::Sub6: return sub6_;
    case BandId::Microwave: return microwave_;
    default: return mmwave_;
  }
}

LinkGainTable::BandTable& LinkGainTable::table(BandId band) {
  switch (band) {
    case BandId::Sub6: return sub6_;
    case BandId::Microwave: return microwave_;
    default: return mmwave_;
  }
}

void LinkGainTable::set(BandId band, NodeId from, NodeId to, double gain) {
  table(band).base[key(from, to)] = gain;
}

void LinkGainTable::set_channel(BandId band, NodeId from, NodeId to, int channel, double gain) {
  table(band).per_channel[key(from, to)][channel] = gain;
}

std::optional<double> LinkGainTable::get(BandId band, NodeId from, NodeId to) const {
  const auto& base = table(band).base;
  auto it = base.find(key(from, to));
  if (it == base.end()) return std::nullopt;
  return it->second;
}

std::optional<double> LinkGainTable::get_channel(BandId band, NodeId from, NodeId to,
                                                 int channel) const {
  const auto& tab = table(band);
  auto pc = tab.per_channel.find(key(from, to));
  if (pc != tab.per_channel.end()) {
    auto it = pc->second.find(channel);
    if (it != pc->second.end()) return it->second;
  }
  return get(band, from, to);
}

bool LinkGainTable::has(BandId band, NodeId from, NodeId to) const {
  return table(band).base.count(key(from, to)) > 0;
}

std::vector<LinkGainTable::Entry> LinkGainTable::entries(BandId band) const {
  std::vector<Entry> out;
  for (const auto& [k, gain] : table(band).base) {
    out.push_back(Entry{static_cast<NodeId>(k >> 32),
                        static_cast<NodeId>(k & 0xffffffffu), gain});
  }
  return out;
}

std::vector<LinkGainTable::ChannelEntry> LinkGainTable::channel_entries(BandId band) const {
  std::vector<ChannelEntry> out;
  for (const auto& [k, channels] : table(band).per_channel) {
    for (const auto& [m, gain] : channels) {
      out.push_back(ChannelEntry{static_cast<NodeId>(k >> 32),
                                 static_cast<NodeId>(k & 0xffffffffu), m, gain});
    }
  }
  return out;
}

const BandProfile& Topology::band(BandId b) const {
  switch (b) {
    case BandId::Sub6: return sub6;
    case BandId::Microwave: return microwave;
    default: return mmwave;
  }
}

std::vector<NodeId> Topology::edge_nodes() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes)
    if (n.kind == NodeKind::Edge) out.push_back(n.id);
  return out;
}

std::vector<NodeId> Topology::aggregator_candidates() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes)
    if (n.kind == NodeKind::AggregatorCandidate) out.push_back(n.id);
  return out;
}

std::vector<NodeId> Topology::gateways() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes)
    if (n.kind == NodeKind::Gateway) out.push_back(n.id);
  return out;
}

namespace {

void check_band(const BandProfile& b, const char* label, std::vector<std::string>& out) {
  auto bad = [&](const std::string& msg) {
    out.push_back(std::string("band ") + label + ": " + msg);
  };
  if (b.channel_width_hz <= 0) bad("non-positive channel width");
  if (b.num_channels <= 0) bad("non-positive channel count");
  if (b.max_power_per_radio_w <= 0) bad("non-positive max power per radio");
  if (b.max_bandwidth_per_radio_hz <= 0) bad("non-positive max bandwidth per radio");
  if (b.noise_spectral_density_w_per_hz <= 0) bad("non-positive noise density");
  if (b.antenna_gain_linear <= 0) bad("non-positive antenna gain");
  if (b.rain_attenuation_db < 0 || b.oxygen_absorption_db < 0 || b.fading_margin_db < 0)
    bad("negative attenuation");
  if (b.band_id == BandId::Sub6) {
    const double expect = b.channel_width_hz * b.num_channels;
    if (std::abs(b.max_bandwidth_per_radio_hz - expect) > 1e-6 * expect)
      bad("max bandwidth per radio != channel width x channel count");
  }
}

}  // namespace

std::vector<std::string> validate_topology(const Topology& t) {
  std::vector<std::string> out;
  auto name = [](NodeId id) {
    std::ostringstream os;
    os << "node " << id;
    return os.str();
  };

  bool any_gateway = false;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const Node& n = t.nodes[i];
    if (n.id != static_cast<NodeId>(i))
      out.push_back(name(n.id) + ": id does not match dense position " + std::to_string(i));
    switch (n.kind) {
      case NodeKind::Edge:
        if (n.demand_bps <= 0) out.push_back("edge " + name(n.id) + ": zero demand");
        if (n.deploy_cost != 0) out.push_back("edge " + name(n.id) + ": deploy cost set");
        break;
      case NodeKind::AggregatorCandidate:
        if (n.deploy_cost < 0) out.push_back(name(n.id) + ": negative deploy cost");
        if (n.demand_bps != 0) out.push_back(name(n.id) + ": demand set on aggregator");
        break;
      case NodeKind::Gateway:
        any_gateway = true;
        if (n.demand_bps != 0) out.push_back(name(n.id) + ": demand set on gateway");
        break;
    }
    if (n.max_radios < 1) out.push_back(name(n.id) + ": max_radios < 1");
  }
  if (!any_gateway) out.push_back("no gateway node");

  check_band(t.sub6, "sub6", out);
  check_band(t.microwave, "microwave", out);
  check_band(t.mmwave, "mmwave", out);
  if (t.sdma_order < 1) out.push_back("sdma order < 1");
  if (t.interference_threshold_w <= 0) out.push_back("non-positive interference threshold");
  if (t.capacity_gap_linear < 1.0) out.push_back("capacity gap factor < 1");

  for (BandId band : {BandId::Sub6, BandId::Microwave, BandId::MmWave}) {
    for (const auto& e : t.gains.entries(band)) {
      if (e.from == e.to)
        out.push_back("gain entry " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                      ": self pair");
      if (e.from < 0 || e.to < 0 || e.from >= static_cast<NodeId>(t.nodes.size()) ||
          e.to >= static_cast<NodeId>(t.nodes.size())) {
        out.push_back("gain entry " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                      ": unknown node");
        continue;
      }
      if (!(e.gain > 0) || !std::isfinite(e.gain))
        out.push_back("gain entry " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                      ": gain not finite positive");
    }
  }
  return out;
}

std::vector<DirectedLink> uplink_adjacency(const Topology& t, BandId band) {
  std::vector<DirectedLink> out;
  auto usable = [&](NodeId from, NodeId to) {
    auto g = t.gains.get(band, from, to);
    return g.has_value() && *g >= t.gain_floor;
  };
  if (band == BandId::MmWave) {
    for (NodeId j : t.aggregator_candidates())
      for (NodeId k : t.gateways())
        if (usable(j, k)) out.push_back(DirectedLink{j, k});
    return out;
  }
  for (NodeId i : t.edge_nodes()) {
    for (const Node& n : t.nodes) {
      if (n.kind == NodeKind::Edge) continue;
      if (usable(i, n.id)) out.push_back(DirectedLink{i, n.id});
    }
  }
  return out;
}

}  // namespace backhaul::core
