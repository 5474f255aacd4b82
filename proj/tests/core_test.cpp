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

#include <algorithm>

#include <doctest.h>

#include "backhaul/core/topology.hpp"
#include "support/instance_gen.hpp"

namespace {

using backhaul::core::BandId;
using backhaul::core::NodeKind;
using backhaul::core::Topology;
using backhaul::core::uplink_adjacency;
using backhaul::core::validate_topology;
namespace ts = backhaul::testsupport;

Topology three_node_topology() {
  Topology t = ts::base_topology();
  t.nodes.push_back(ts::edge_node(0, 100.0));
  t.nodes.push_back(ts::aggregator_node(1));
  t.nodes.push_back(ts::gateway_node(2));
  ts::set_gain_db(t, BandId::Microwave, 0, 1, -90.0);
  ts::set_gain_db(t, BandId::Microwave, 0, 2, -100.0);
  ts::set_gain_db(t, BandId::Sub6, 0, 1, -95.0);
  ts::set_gain_db(t, BandId::Sub6, 0, 2, -105.0);
  ts::set_gain_db(t, BandId::MmWave, 1, 2, -85.0);
  return t;
}

TEST_CASE("well-formed topology validates cleanly") {
  CHECK(validate_topology(three_node_topology()).empty());
}

TEST_CASE("missing gateway is reported") {
  Topology t = three_node_topology();
  t.nodes[2].kind = NodeKind::AggregatorCandidate;
  const auto violations = validate_topology(t);
  bool found = false;
  for (const auto& v : violations) found = found || v.find("no gateway") != std::string::npos;
  CHECK(found);
}

TEST_CASE("zero-demand edge node is reported with its id") {
  Topology t = three_node_topology();
  t.nodes[0].demand_bps = 0.0;
  const auto violations = validate_topology(t);
  bool found = false;
  for (const auto& v : violations)
    found = found || (v.find("zero demand") != std::string::npos &&
                      v.find("node 0") != std::string::npos);
  CHECK(found);
}

TEST_CASE("self gain entries and bad parameters are reported") {
  Topology t = three_node_topology();
  t.gains.set(BandId::Sub6, 1, 1, 0.5);
  t.sdma_order = 0;
  const auto violations = validate_topology(t);
  CHECK(violations.size() >= 2);
}

TEST_CASE("uplink adjacency structure") {
  const Topology t = three_node_topology();

  SUBCASE("edge band carries EN pairs, mmwave the AN pair") {
    const auto mw = uplink_adjacency(t, BandId::Microwave);
    REQUIRE(mw.size() == 2);
    CHECK(mw[0].from == 0);
    const auto mm = uplink_adjacency(t, BandId::MmWave);
    REQUIRE(mm.size() == 1);
    CHECK(mm[0].from == 1);
    CHECK(mm[0].to == 2);
  }

  SUBCASE("absent gain entry drops the pair") {
    Topology t2 = three_node_topology();
    Topology fresh = ts::base_topology();
    fresh.nodes = t2.nodes;
    ts::set_gain_db(fresh, BandId::Microwave, 0, 1, -90.0);  // only EN->AN
    ts::set_gain_db(fresh, BandId::MmWave, 1, 2, -85.0);
    const auto mw = uplink_adjacency(fresh, BandId::Microwave);
    REQUIRE(mw.size() == 1);
    CHECK(mw[0].to == 1);
  }

  SUBCASE("EN-to-EN gains are never emitted") {
    Topology t2 = three_node_topology();
    t2.nodes.push_back(ts::edge_node(3, 50.0));
    ts::set_gain_db(t2, BandId::Microwave, 0, 3, -60.0);
    ts::set_gain_db(t2, BandId::Microwave, 3, 1, -80.0);
    for (const auto& link : uplink_adjacency(t2, BandId::Microwave)) {
      CHECK(t2.node(link.from).kind == NodeKind::Edge);
      CHECK(t2.node(link.to).kind != NodeKind::Edge);
    }
  }

  SUBCASE("gains below the floor are no links") {
    Topology t2 = three_node_topology();
    t2.gain_floor = 1e-8;  // above every entry in this fixture
    CHECK(uplink_adjacency(t2, BandId::Microwave).empty());
  }
}

TEST_CASE("per-channel gains fall back to the base entry") {
  Topology t = three_node_topology();
  t.gains.set_channel(BandId::Sub6, 0, 1, 2, 3e-10);
  CHECK(*t.gains.get_channel(BandId::Sub6, 0, 1, 2) == doctest::Approx(3e-10));
  CHECK(*t.gains.get_channel(BandId::Sub6, 0, 1, 0) ==
        doctest::Approx(*t.gains.get(BandId::Sub6, 0, 1)));
  CHECK(!t.gains.get_channel(BandId::Sub6, 2, 0, 0).has_value());
}

}  // namespace
