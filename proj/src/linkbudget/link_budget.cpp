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

#include "backhaul/linkbudget/link_budget.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "backhaul/core/topology.hpp"

namespace backhaul::linkbudget {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSpeedOfLight = 299792458.0;
}  // namespace

double fspl_reference_db(double carrier_hz) {
  // 20 log10(4 pi d f / c) at d = 1 m.
  return 20.0 * std::log10(4.0 * M_PI * carrier_hz / kSpeedOfLight);
}

double band_carrier_hz(core::BandId band) {
  switch (band) {
    case core::BandId::Sub6: return 5.8e9;
    case core::BandId::Microwave: return 28e9;
    default: return 60e9;
  }
}

double band_extra_attenuation_db(const core::BandProfile& band) {
  return band.rain_attenuation_db + band.oxygen_absorption_db + band.fading_margin_db;
}

double synth_gain(const PathLossModel& model, const core::BandProfile& band,
                  double distance_m, bool los) {
  if (!(distance_m > 0.0))
    throw std::invalid_argument("synth_gain: degenerate geometry (distance <= 0)");
  const double exponent = los ? model.exponent_los : model.exponent_nlos;
  const double pl_db = model.reference_loss_db_at_1m + 10.0 * exponent * std::log10(distance_m);
  const double total_db = pl_db + model.extra_attenuation_db;
  return band.antenna_gain_linear * band.antenna_gain_linear *
         std::pow(10.0, -total_db / 10.0);
}

namespace {

struct ActiveLink {
  core::NodeId from = -1;
  core::NodeId to = -1;
  double tx_power_w = 0.0;
  double rx_bandwidth_hz = 0.0;
  int channel = -1;  // sub-6 only; -1 means continuous sharing
};

std::vector<ActiveLink> active_links(const core::DeploymentPlan& plan, core::BandId band,
                                     const core::Topology& t) {
  std::vector<ActiveLink> out;
  if (band == core::BandId::Microwave) {
    for (const auto& [key, alloc] : plan.en_link_alloc) {
      if (alloc.power_w > 0.0 && alloc.bandwidth_hz > 0.0)
        out.push_back(ActiveLink{key.from, key.to, alloc.power_w, alloc.bandwidth_hz, -1});
    }
  } else if (band == core::BandId::Sub6) {
    for (const auto& [key, channels] : plan.en_channel_alloc) {
      for (const core::ChannelAlloc& c : channels) {
        if (c.power_w > 0.0)
          out.push_back(ActiveLink{key.from, key.to, c.power_w,
                                   t.sub6.channel_width_hz, c.channel});
      }
    }
  } else {
    for (const auto& [key, alloc] : plan.an_gn_alloc) {
      if (alloc.power_w > 0.0 && alloc.bandwidth_hz > 0.0)
        out.push_back(ActiveLink{key.from, key.to, alloc.power_w, alloc.bandwidth_hz, -1});
    }
  }
  return out;
}

double angle_deg(const core::Vec3& at, const core::Vec3& toward_a, const core::Vec3& toward_b) {
  const double ax = toward_a.x - at.x, ay = toward_a.y - at.y, az = toward_a.z - at.z;
  const double bx = toward_b.x - at.x, by = toward_b.y - at.y, bz = toward_b.z - at.z;
  const double na = std::sqrt(ax * ax + ay * ay + az * az);
  const double nb = std::sqrt(bx * bx + by * by + bz * bz);
  if (na == 0.0 || nb == 0.0) return 0.0;
  double c = (ax * bx + ay * by + az * bz) / (na * nb);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

double distance_m(const core::Vec3& a, const core::Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Propagation gain between interferer transmitter and victim receiver with
// antenna factors stripped; pattern gains are applied separately.
std::optional<double> path_gain(const core::Topology& t, core::BandId band,
                                core::NodeId tx, core::NodeId rx) {
  if (auto g = t.gains.get(band, tx, rx); g.has_value()) {
    const double ant = t.band(band).antenna_gain_linear;
    return *g / (ant * ant);
  }
  const core::Node& a = t.node(tx);
  const core::Node& b = t.node(rx);
  if (!a.position.has_value() || !b.position.has_value()) return std::nullopt;
  PathLossModel model;
  model.reference_loss_db_at_1m = fspl_reference_db(band_carrier_hz(band));
  model.extra_attenuation_db = band_extra_attenuation_db(t.band(band));
  const bool los =
      a.kind != core::NodeKind::Edge && b.kind != core::NodeKind::Edge;
  const double d = distance_m(*a.position, *b.position);
  if (d <= 0.0) return std::nullopt;
  const double exponent = los ? model.exponent_los : model.exponent_nlos;
  const double pl_db = model.reference_loss_db_at_1m + 10.0 * exponent * std::log10(d) +
                       model.extra_attenuation_db;
  return std::pow(10.0, -pl_db / 10.0);
}

}  // namespace

std::map<core::BandId, InterferenceMargin> interference_margin(
    const core::DeploymentPlan& plan, const core::Topology& t,
    const AntennaPattern& pattern) {
  std::map<core::BandId, InterferenceMargin> out;
  for (core::BandId band :
       {core::BandId::Sub6, core::BandId::Microwave, core::BandId::MmWave}) {
    const std::vector<ActiveLink> links = active_links(plan, band, t);
    InterferenceMargin margin;
    margin.margin_db = kInf;
    int skipped = 0;
    for (std::size_t a = 0; a < links.size(); ++a) {
      for (std::size_t b = 0; b < links.size(); ++b) {
        if (a == b) continue;
        const ActiveLink& victim = links[a];
        const ActiveLink& interferer = links[b];
        // Adjacent links (sharing a node) are excluded from the pair set.
        if (victim.from == interferer.from || victim.from == interferer.to ||
            victim.to == interferer.from || victim.to == interferer.to)
          continue;
        // In the channelized band only co-channel links share spectrum.
        if (band == core::BandId::Sub6 && victim.channel != interferer.channel) continue;
        ++margin.pairs_checked;

        const core::Node& vi = t.node(victim.from);   // victim transmitter
        const core::Node& vj = t.node(victim.to);     // victim receiver
        const core::Node& ik = t.node(interferer.from);
        const core::Node& ih = t.node(interferer.to);
        if (!vi.position.has_value() || !vj.position.has_value() ||
            !ik.position.has_value() || !ih.position.has_value()) {
          ++skipped;
          continue;
        }
        const std::optional<double> g = path_gain(t, band, interferer.from, victim.to);
        if (!g.has_value()) {
          ++skipped;
          continue;
        }
        const double half_bw = pattern.beamwidth_deg / 2.0;
        // Interferer's transmit beam points at its own receiver h.
        const double tx_angle = angle_deg(*ik.position, *ih.position, *vj.position);
        // Victim's receive beam points at its own transmitter i.
        const double rx_angle = angle_deg(*vj.position, *vi.position, *ik.position);
        const double tx_gain =
            tx_angle <= half_bw ? pattern.boresight_gain_linear : pattern.sidelobe_gain_linear;
        const double rx_gain =
            rx_angle <= half_bw ? pattern.boresight_gain_linear : pattern.sidelobe_gain_linear;
        const double interference_w = interferer.tx_power_w * tx_gain * rx_gain * *g;
        const double noise_w =
            t.band(band).noise_spectral_density_w_per_hz * victim.rx_bandwidth_hz;
        if (interference_w <= 0.0) continue;  // contributes +inf margin
        const double pair_margin =
            10.0 * std::log10(noise_w) - 10.0 * std::log10(interference_w);
        margin.margin_db = std::min(margin.margin_db, pair_margin);
      }
    }
    if (margin.pairs_checked == 0) {
      margin.applicable = false;
      margin.reason = "no non-adjacent active link pairs";
    } else if (skipped == margin.pairs_checked) {
      margin.applicable = false;
      margin.reason = "node positions missing";
    } else {
      margin.applicable = true;
    }
    out[band] = margin;
  }
  return out;
}

}  // namespace backhaul::linkbudget
