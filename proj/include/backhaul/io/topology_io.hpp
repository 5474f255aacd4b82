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
#include <string>

#include "backhaul/core/types.hpp"

namespace backhaul::io {

// Topology files are a single JSON document with sections `global`
// (A, P_I_dbm, N0_dbm_hz), `bands` (per-band physical parameters, dB fields
// suffixed _db/_dbm), `nodes`, `gains` (db or linear, optional per-channel)
// and an optional `pathloss` block used to synthesize gains from node
// positions when the gains section is absent. All dB quantities are
// converted to linear SI on ingestion.
//
// Throws std::runtime_error naming the offending field on malformed input
// and aggregating all validation violations.
core::Topology parse_topology(const std::string& path, std::uint64_t seed = 0);
core::Topology parse_topology_text(const std::string& text, std::uint64_t seed = 0);

// Inverse of parse: emits the same schema with linear gain values so a
// parse/serialize round trip is exact.
std::string serialize_topology(const core::Topology& t);
void write_topology(const core::Topology& t, const std::string& path);

}  // namespace backhaul::io
