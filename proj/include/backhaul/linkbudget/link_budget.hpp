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

#include <map>
#include <optional>
#include <string>

#include "backhaul/core/types.hpp"

namespace backhaul::linkbudget {

// Parametric log-distance path loss standing in for ray-traced gains.
struct PathLossModel {
  double reference_loss_db_at_1m = 0.0;
  double exponent_los = 2.0;
  double exponent_nlos = 3.5;
  double extra_attenuation_db = 0.0;  // rain + oxygen + fading margin
};

// Free-space reference loss at 1 m for a carrier frequency.
double fspl_reference_db(double carrier_hz);

// Representative carrier for each band (5.8 / 28 / 60 GHz).
double band_carrier_hz(core::BandId band);

// Extra attenuation from a band profile (rain + oxygen + fading margin).
double band_extra_attenuation_db(const core::BandProfile& band);

// Linear gain tx_antenna * rx_antenna * 10^(-(PL(d) + extra)/10), with
// PL(d) = reference_loss + 10 * exponent * log10(d). Deterministic. Throws
// std::invalid_argument when distance_m <= 0 ("degenerate geometry").
double synth_gain(const PathLossModel& model, const core::BandProfile& band,
                  double distance_m, bool los);

struct AntennaPattern {
  double boresight_gain_linear = 1.0;
  double beamwidth_deg = 10.0;
  double sidelobe_gain_linear = 0.0;  // 0 = no side lobes
};

struct InterferenceMargin {
  bool applicable = false;
  std::string reason;       // set when not applicable
  double margin_db = 0.0;   // +inf when no pair receives any interference
  int pairs_checked = 0;
};

// Worst-case margin (noise floor over interference, dB) across pairs of
// non-adjacent simultaneously active links per band, with pattern gains
// applied by boresight alignment. Nodes involved need positions. Bands with
// no active link pair report applicable = false.
std::map<core::BandId, InterferenceMargin> interference_margin(
    const core::DeploymentPlan& plan, const core::Topology& t,
    const AntennaPattern& pattern);

}  // namespace backhaul::linkbudget
