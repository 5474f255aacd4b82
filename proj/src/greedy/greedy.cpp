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

#include "backhaul/greedy/greedy.hpp"

#include <algorithm>
#include <set>

#include "backhaul/capacity/capacity.hpp"

namespace backhaul::greedy {

std::vector<CoverageSet> coverage_sets(const core::Topology& t, core::BandId band) {
  const core::BandProfile& profile = t.band(band);
  std::vector<CoverageSet> sets;
  for (const core::Node& n : t.nodes) {
    if (n.kind == core::NodeKind::Edge) continue;
    CoverageSet cs;
    cs.center = n.id;
    cs.weight = n.kind == core::NodeKind::Gateway ? 0.0 : n.deploy_cost;
    for (core::NodeId i : t.edge_nodes()) {
      const auto gain = t.gains.get(band, i, n.id);
      if (!gain.has_value() || *gain < t.gain_floor) continue;
      capacity::CapacityFn fn{*gain, profile.noise_spectral_density_w_per_hz};
      const double cap = capacity::capacity(fn, profile.max_power_per_radio_w,
                                            profile.max_bandwidth_per_radio_hz);
      if (cap >= t.node(i).demand_bps) cs.members.push_back(i);
    }
    std::sort(cs.members.begin(), cs.members.end());
    sets.push_back(std::move(cs));
  }
  return sets;
}

namespace {

// Remaining-coverage count of a set against the uncovered pool.
int remaining(const CoverageSet& cs, const std::set<core::NodeId>& uncovered,
              GreedyStats* stats) {
  int count = 0;
  for (core::NodeId i : cs.members) {
    if (stats != nullptr) ++stats->operations;
    if (uncovered.count(i) > 0) ++count;
  }
  return count;
}

}  // namespace

core::DeploymentPlan greedy_place(const core::Topology& t, core::BandId band,
                                  GreedyStats* stats) {
  const std::vector<CoverageSet> sets = coverage_sets(t, band);
  std::set<core::NodeId> uncovered;
  for (core::NodeId i : t.edge_nodes()) uncovered.insert(i);

  core::DeploymentPlan plan;
  std::vector<char> used(sets.size(), 0);

  auto assign = [&](const CoverageSet& cs) {
    for (core::NodeId i : cs.members) {
      if (uncovered.erase(i) == 0) continue;
      plan.flows[core::LinkKey{i, cs.center}] = t.node(i).demand_bps;
    }
  };

  // Phase 1: gateways, by maximum remaining coverage. Gateways with empty
  // remaining coverage are skipped rather than selected.
  while (!uncovered.empty()) {
    int best = -1, best_cover = 0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      if (used[s] || t.node(sets[s].center).kind != core::NodeKind::Gateway) continue;
      const int cover = remaining(sets[s], uncovered, stats);
      if (cover > best_cover ||
          (cover == best_cover && cover > 0 && best >= 0 &&
           sets[s].center < sets[static_cast<std::size_t>(best)].center)) {
        best = static_cast<int>(s);
        best_cover = cover;
      }
    }
    if (best < 0 || best_cover == 0) break;
    used[static_cast<std::size_t>(best)] = 1;
    assign(sets[static_cast<std::size_t>(best)]);
  }

  // Phase 2: aggregator candidates by coverage-per-cost ratio; equal costs
  // reduce to plain maximum coverage. Ties break on lower cost, then id.
  while (!uncovered.empty()) {
    int best = -1, best_cover = 0;
    double best_ratio = -1.0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      if (used[s] ||
          t.node(sets[s].center).kind != core::NodeKind::AggregatorCandidate)
        continue;
      const int cover = remaining(sets[s], uncovered, stats);
      if (cover == 0) continue;
      const double ratio = sets[s].weight > 0.0
                               ? static_cast<double>(cover) / sets[s].weight
                               : static_cast<double>(cover) * 1e18;
      bool take = ratio > best_ratio + 1e-12;
      if (!take && best >= 0 && std::abs(ratio - best_ratio) <= 1e-12) {
        const CoverageSet& cur = sets[static_cast<std::size_t>(best)];
        if (sets[s].weight < cur.weight - 1e-12)
          take = true;
        else if (std::abs(sets[s].weight - cur.weight) <= 1e-12 &&
                 sets[s].center < cur.center)
          take = true;
      }
      if (take) {
        best = static_cast<int>(s);
        best_ratio = ratio;
        best_cover = cover;
      }
    }
    if (best < 0 || best_cover == 0) break;
    used[static_cast<std::size_t>(best)] = 1;
    const CoverageSet& cs = sets[static_cast<std::size_t>(best)];
    plan.selected_ans.push_back(cs.center);
    plan.objective += cs.weight;
    assign(cs);
  }

  std::sort(plan.selected_ans.begin(), plan.selected_ans.end());
  plan.infeasible_ens.assign(uncovered.begin(), uncovered.end());
  plan.lower_bound = 0.0;
  plan.gap = plan.objective > 0.0 ? 1.0 : 0.0;
  return plan;
}

}  // namespace backhaul::greedy
