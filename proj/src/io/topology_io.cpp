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

#include "backhaul/io/topology_io.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "backhaul/core/topology.hpp"
#include "backhaul/linkbudget/link_budget.hpp"

namespace backhaul::io {
namespace {

using nlohmann::ordered_json;
using core::BandId;

BandId band_from_string(const std::string& s) {
  if (s == "sub6") return BandId::Sub6;
  if (s == "microwave") return BandId::Microwave;
  if (s == "mmwave") return BandId::MmWave;
  throw std::runtime_error("unknown band '" + s + "'");
}

const char* band_to_string(BandId b) {
  switch (b) {
    case BandId::Sub6: return "sub6";
    case BandId::Microwave: return "microwave";
    default: return "mmwave";
  }
}

// Table-of-features defaults for the three representative carriers.
core::BandProfile default_band(BandId id) {
  core::BandProfile b;
  b.band_id = id;
  b.noise_spectral_density_w_per_hz = core::dbm_to_watts(-174.0);
  switch (id) {
    case BandId::Sub6:
      b.rain_attenuation_db = 0.0;
      b.oxygen_absorption_db = 0.0;
      b.antenna_gain_linear = core::db_to_linear(17.0);
      b.max_power_per_radio_w = core::dbm_to_watts(19.0);
      b.fading_margin_db = 15.0;
      b.channel_width_hz = 40e6;
      b.num_channels = 6;
      break;
    case BandId::Microwave:
      b.rain_attenuation_db = 2.5;
      b.oxygen_absorption_db = 0.5;
      b.antenna_gain_linear = core::db_to_linear(38.0);
      b.max_power_per_radio_w = core::dbm_to_watts(19.0);
      b.fading_margin_db = 25.0;
      b.channel_width_hz = 56e6;
      b.num_channels = 6;
      break;
    case BandId::MmWave:
      b.rain_attenuation_db = 10.0;
      b.oxygen_absorption_db = 15.0;
      b.antenna_gain_linear = core::db_to_linear(38.0);
      b.max_power_per_radio_w = core::dbm_to_watts(25.0);
      b.fading_margin_db = 25.0;
      b.channel_width_hz = 160e6;
      b.num_channels = 6;
      break;
  }
  b.max_bandwidth_per_radio_hz = b.channel_width_hz * b.num_channels;
  return b;
}

core::BandProfile parse_band(BandId id, const ordered_json& j, const std::string& where) {
  core::BandProfile b = default_band(id);
  auto num = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
      throw std::runtime_error(where + "." + key + ": expected a number");
    return j.at(key).get<double>();
  };
  b.rain_attenuation_db = num("rain_attenuation_db", b.rain_attenuation_db);
  b.oxygen_absorption_db = num("oxygen_absorption_db", b.oxygen_absorption_db);
  b.fading_margin_db = num("fading_margin_db", b.fading_margin_db);
  b.antenna_gain_linear =
      core::db_to_linear(num("antenna_gain_db", core::linear_to_db(b.antenna_gain_linear)));
  b.max_power_per_radio_w =
      core::dbm_to_watts(num("max_power_dbm", core::watts_to_dbm(b.max_power_per_radio_w)));
  b.channel_width_hz = num("channel_width_mhz", b.channel_width_hz / 1e6) * 1e6;
  if (j.contains("num_channels")) b.num_channels = j.at("num_channels").get<int>();
  if (j.contains("noise_density_dbm_hz"))
    b.noise_spectral_density_w_per_hz =
        core::dbm_to_watts(j.at("noise_density_dbm_hz").get<double>());
  if (j.contains("max_bandwidth_per_radio_mhz"))
    b.max_bandwidth_per_radio_hz = j.at("max_bandwidth_per_radio_mhz").get<double>() * 1e6;
  else
    b.max_bandwidth_per_radio_hz = b.channel_width_hz * b.num_channels;
  return b;
}

void synthesize_gains(core::Topology& t, const ordered_json& pathloss, std::uint64_t seed) {
  linkbudget::PathLossModel base;
  if (pathloss.contains("exponent_los")) base.exponent_los = pathloss.at("exponent_los");
  if (pathloss.contains("exponent_nlos")) base.exponent_nlos = pathloss.at("exponent_nlos");
  const double sigma_db =
      pathloss.contains("shadowing_sigma_db") ? pathloss.at("shadowing_sigma_db").get<double>() : 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shadow(0.0, 1.0);

  auto dist = [&](const core::Node& a, const core::Node& b) {
    if (!a.position.has_value() || !b.position.has_value())
      throw std::runtime_error("gain synthesis requires node positions (node " +
                               std::to_string(a.id) + " or " + std::to_string(b.id) +
                               " lacks xyz)");
    const double dx = a.position->x - b.position->x;
    const double dy = a.position->y - b.position->y;
    const double dz = a.position->z - b.position->z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  };

  auto synth_pair = [&](BandId band, const core::Node& from, const core::Node& to,
                        bool los) {
    const core::BandProfile& profile = t.band(band);
    linkbudget::PathLossModel model = base;
    if (pathloss.contains("reference_loss_db_at_1m"))
      model.reference_loss_db_at_1m = pathloss.at("reference_loss_db_at_1m");
    else
      model.reference_loss_db_at_1m =
          linkbudget::fspl_reference_db(linkbudget::band_carrier_hz(band));
    model.extra_attenuation_db = linkbudget::band_extra_attenuation_db(profile);
    double gain = linkbudget::synth_gain(model, profile, dist(from, to), los);
    if (sigma_db > 0.0) gain *= core::db_to_linear(sigma_db * shadow(rng));
    t.gains.set(band, from.id, to.id, gain);
  };

  for (const core::Node& en : t.nodes) {
    if (en.kind != core::NodeKind::Edge) continue;
    for (const core::Node& recv : t.nodes) {
      if (recv.kind == core::NodeKind::Edge) continue;
      synth_pair(BandId::Sub6, en, recv, false);
      synth_pair(BandId::Microwave, en, recv, false);
    }
  }
  for (const core::Node& an : t.nodes) {
    if (an.kind != core::NodeKind::AggregatorCandidate) continue;
    for (const core::Node& gn : t.nodes) {
      if (gn.kind != core::NodeKind::Gateway) continue;
      synth_pair(BandId::MmWave, an, gn, true);
    }
  }
}

}  // namespace

core::Topology parse_topology_text(const std::string& text, std::uint64_t seed) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("topology parse error: ") + e.what());
  }

  core::Topology t;
  t.sub6 = default_band(BandId::Sub6);
  t.microwave = default_band(BandId::Microwave);
  t.mmwave = default_band(BandId::MmWave);

  if (doc.contains("bands")) {
    const auto& bands = doc.at("bands");
    if (bands.contains("sub6")) t.sub6 = parse_band(BandId::Sub6, bands.at("sub6"), "bands.sub6");
    if (bands.contains("microwave"))
      t.microwave = parse_band(BandId::Microwave, bands.at("microwave"), "bands.microwave");
    if (bands.contains("mmwave"))
      t.mmwave = parse_band(BandId::MmWave, bands.at("mmwave"), "bands.mmwave");
  }

  if (doc.contains("global")) {
    const auto& g = doc.at("global");
    if (g.contains("A")) t.sdma_order = g.at("A").get<int>();
    if (g.contains("P_I_dbm"))
      t.interference_threshold_w = core::dbm_to_watts(g.at("P_I_dbm").get<double>());
    if (g.contains("N0_dbm_hz")) {
      const double n0 = core::dbm_to_watts(g.at("N0_dbm_hz").get<double>());
      t.sub6.noise_spectral_density_w_per_hz = n0;
      t.microwave.noise_spectral_density_w_per_hz = n0;
      t.mmwave.noise_spectral_density_w_per_hz = n0;
    }
    if (g.contains("capacity_gap_db"))
      t.capacity_gap_linear = core::db_to_linear(g.at("capacity_gap_db").get<double>());
    if (g.contains("gain_floor")) t.gain_floor = g.at("gain_floor").get<double>();
  }
  if (t.interference_threshold_w == 0.0) {
    // 10 dB below the sub-6 channel noise floor.
    t.interference_threshold_w =
        0.1 * t.sub6.noise_spectral_density_w_per_hz * t.sub6.channel_width_hz;
  }

  if (!doc.contains("nodes") || !doc.at("nodes").is_array())
    throw std::runtime_error("topology: missing nodes[] section");
  for (std::size_t idx = 0; idx < doc.at("nodes").size(); ++idx) {
    const auto& jn = doc.at("nodes")[idx];
    const std::string where = "nodes[" + std::to_string(idx) + "]";
    core::Node n;
    n.id = jn.contains("id") ? jn.at("id").get<core::NodeId>()
                             : static_cast<core::NodeId>(idx);
    if (!jn.contains("kind")) throw std::runtime_error(where + ": missing kind");
    const std::string kind = jn.at("kind").get<std::string>();
    if (kind == "edge") {
      n.kind = core::NodeKind::Edge;
      if (!jn.contains("demand_mbps"))
        throw std::runtime_error(where + ": edge node missing demand_mbps");
      n.demand_bps = jn.at("demand_mbps").get<double>() * 1e6;
    } else if (kind == "aggregator") {
      n.kind = core::NodeKind::AggregatorCandidate;
      n.deploy_cost = jn.contains("cost") ? jn.at("cost").get<double>() : 1.0;
    } else if (kind == "gateway") {
      n.kind = core::NodeKind::Gateway;
    } else {
      throw std::runtime_error(where + ": unknown kind '" + kind + "'");
    }
    if (jn.contains("radios")) n.max_radios = jn.at("radios").get<int>();
    if (jn.contains("xyz")) {
      const auto& xyz = jn.at("xyz");
      if (!xyz.is_array() || xyz.size() != 3)
        throw std::runtime_error(where + ".xyz: expected [x, y, z]");
      n.position = core::Vec3{xyz[0].get<double>(), xyz[1].get<double>(),
                              xyz[2].get<double>()};
    }
    t.nodes.push_back(n);
  }

  const bool has_gains = doc.contains("gains") && !doc.at("gains").empty();
  if (has_gains) {
    for (std::size_t idx = 0; idx < doc.at("gains").size(); ++idx) {
      const auto& jg = doc.at("gains")[idx];
      const std::string where = "gains[" + std::to_string(idx) + "]";
      if (!jg.contains("band")) throw std::runtime_error(where + ": missing band");
      const BandId band = band_from_string(jg.at("band").get<std::string>());
      if (!jg.contains("from") || !jg.contains("to"))
        throw std::runtime_error(where + ": missing from/to");
      const core::NodeId from = jg.at("from").get<core::NodeId>();
      const core::NodeId to = jg.at("to").get<core::NodeId>();
      double gain;
      if (jg.contains("db"))
        gain = core::db_to_linear(jg.at("db").get<double>());
      else if (jg.contains("linear"))
        gain = jg.at("linear").get<double>();
      else
        throw std::runtime_error(where + ": need db or linear");
      if (jg.contains("channel"))
        t.gains.set_channel(band, from, to, jg.at("channel").get<int>(), gain);
      else
        t.gains.set(band, from, to, gain);
    }
  } else {
    synthesize_gains(t, doc.contains("pathloss") ? doc.at("pathloss") : ordered_json::object(),
                     seed);
  }

  const std::vector<std::string> violations = core::validate_topology(t);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "topology validation failed:";
    for (const std::string& v : violations) os << "\n  - " << v;
    throw std::runtime_error(os.str());
  }
  return t;
}

core::Topology parse_topology(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_topology_text(buf.str(), seed);
}

std::string serialize_topology(const core::Topology& t) {
  ordered_json doc;
  doc["global"]["A"] = t.sdma_order;
  doc["global"]["P_I_dbm"] = core::watts_to_dbm(t.interference_threshold_w);
  doc["global"]["N0_dbm_hz"] =
      core::watts_to_dbm(t.sub6.noise_spectral_density_w_per_hz);
  if (t.capacity_gap_linear != 1.0)
    doc["global"]["capacity_gap_db"] = core::linear_to_db(t.capacity_gap_linear);
  doc["global"]["gain_floor"] = t.gain_floor;

  for (const core::BandProfile* b : {&t.sub6, &t.microwave, &t.mmwave}) {
    ordered_json jb;
    jb["rain_attenuation_db"] = b->rain_attenuation_db;
    jb["oxygen_absorption_db"] = b->oxygen_absorption_db;
    jb["antenna_gain_db"] = core::linear_to_db(b->antenna_gain_linear);
    jb["max_power_dbm"] = core::watts_to_dbm(b->max_power_per_radio_w);
    jb["fading_margin_db"] = b->fading_margin_db;
    jb["channel_width_mhz"] = b->channel_width_hz / 1e6;
    jb["num_channels"] = b->num_channels;
    jb["noise_density_dbm_hz"] = core::watts_to_dbm(b->noise_spectral_density_w_per_hz);
    jb["max_bandwidth_per_radio_mhz"] = b->max_bandwidth_per_radio_hz / 1e6;
    doc["bands"][band_to_string(b->band_id)] = jb;
  }

  for (const core::Node& n : t.nodes) {
    ordered_json jn;
    jn["id"] = n.id;
    switch (n.kind) {
      case core::NodeKind::Edge:
        jn["kind"] = "edge";
        jn["demand_mbps"] = n.demand_bps / 1e6;
        break;
      case core::NodeKind::AggregatorCandidate:
        jn["kind"] = "aggregator";
        jn["cost"] = n.deploy_cost;
        break;
      case core::NodeKind::Gateway:
        jn["kind"] = "gateway";
        break;
    }
    jn["radios"] = n.max_radios;
    if (n.position.has_value())
      jn["xyz"] = {n.position->x, n.position->y, n.position->z};
    doc["nodes"].push_back(jn);
  }

  doc["gains"] = ordered_json::array();
  for (BandId band : {BandId::Sub6, BandId::Microwave, BandId::MmWave}) {
    for (const auto& e : t.gains.entries(band)) {
      ordered_json jg;
      jg["band"] = band_to_string(band);
      jg["from"] = e.from;
      jg["to"] = e.to;
      jg["linear"] = e.gain;
      doc["gains"].push_back(jg);
    }
    for (const auto& e : t.gains.channel_entries(band)) {
      ordered_json jg;
      jg["band"] = band_to_string(band);
      jg["from"] = e.from;
      jg["to"] = e.to;
      jg["channel"] = e.channel;
      jg["linear"] = e.gain;
      doc["gains"].push_back(jg);
    }
  }
  return doc.dump(2) + "\n";
}

void write_topology(const core::Topology& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write topology file: " + path);
  out << serialize_topology(t);
}

}  // namespace backhaul::io
