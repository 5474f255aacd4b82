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

#include <cmath>
#include <string>
#include <vector>

#include "backhaul/core/types.hpp"

namespace backhaul::core {

// Returns an empty list iff the topology satisfies every structural
// invariant; each violation names the offending node/link and rule.
std::vector<std::string> validate_topology(const Topology& t);

struct DirectedLink {
  NodeId from = -1;
  NodeId to = -1;
};

// Uplink link set for one band: EN -> {AN, GN} pairs for the edge-node
// band, AN -> GN pairs for MmWave. Only pairs present in the gain table
// (above the gain floor) are returned, sorted by (from, to).
std::vector<DirectedLink> uplink_adjacency(const Topology& t, BandId band);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

}  // namespace backhaul::core
