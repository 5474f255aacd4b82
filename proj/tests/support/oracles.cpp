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

#include "support/oracles.hpp"

#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace backhaul::testsupport {

using core::NodeId;
using core::NodeKind;
using core::Topology;
using milp::LpStatus;
using milp::solve_lp;
using milp::warm_fix;

double enumerate_microwave_placements(const form::MicrowaveFormulation& f,
                                      const Topology& t) {
  const int n_an = static_cast<int>(f.an_ids.size());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << n_an); ++mask) {
    std::vector<std::pair<int, double>> fixed;
    double cost = 0.0;
    for (int b = 0; b < n_an; ++b) {
      const bool on = (mask >> b) & 1;
      fixed.emplace_back(f.y_col.at(f.an_ids[static_cast<std::size_t>(b)]),
                         on ? 1.0 : 0.0);
      if (on) cost += t.node(f.an_ids[static_cast<std::size_t>(b)]).deploy_cost;
    }
    if (cost >= best) continue;
    if (solve_lp(warm_fix(f.model, fixed)).status == LpStatus::Optimal) best = cost;
  }
  return best;
}

double enumerate_sub6_schedules(const form::Sub6Formulation& f, const Topology& t) {
  const int n_an = static_cast<int>(f.an_ids.size());
  const int n_links = static_cast<int>(f.en_links.size());
  const int m = f.num_channels;
  const int n_slots = n_links * m;
  if (n_slots > 20)
    throw std::invalid_argument("enumerate_sub6_schedules: slot space too large");

  double best = std::numeric_limits<double>::infinity();
  for (int ymask = 0; ymask < (1 << n_an); ++ymask) {
    double cost = 0.0;
    std::set<NodeId> active_ans;
    for (int b = 0; b < n_an; ++b) {
      if ((ymask >> b) & 1) {
        cost += t.node(f.an_ids[static_cast<std::size_t>(b)]).deploy_cost;
        active_ans.insert(f.an_ids[static_cast<std::size_t>(b)]);
      }
    }
    if (cost >= best) continue;

    for (long xmask = 0; xmask < (1L << n_slots); ++xmask) {
      std::map<std::pair<NodeId, int>, int> sdma;  // (receiver, channel)
      std::map<NodeId, int> en_radios;
      std::map<NodeId, std::set<int>> node_channels;
      bool ok = true;
      for (int s = 0; s < n_slots && ok; ++s) {
        if (!((xmask >> s) & 1)) continue;
        const int l = s / m;
        const int ch = s % m;
        const NodeId to = f.en_links[static_cast<std::size_t>(l)].to;
        const NodeId from = f.en_links[static_cast<std::size_t>(l)].from;
        if (t.node(to).kind == NodeKind::AggregatorCandidate && active_ans.count(to) == 0)
          ok = false;
        if (++sdma[{to, ch}] > t.sdma_order) ok = false;
        if (++en_radios[from] > t.node(from).max_radios) ok = false;
        node_channels[to].insert(ch);
      }
      if (!ok) continue;
      for (const auto& [node, channels] : node_channels)
        if (static_cast<int>(channels.size()) > t.node(node).max_radios) ok = false;
      if (!ok) continue;

      std::vector<std::pair<int, double>> fixed;
      for (int b = 0; b < n_an; ++b)
        fixed.emplace_back(f.y_col.at(f.an_ids[static_cast<std::size_t>(b)]),
                           (ymask >> b) & 1 ? 1.0 : 0.0);
      for (int l = 0; l < n_links; ++l)
        for (int ch = 0; ch < m; ++ch)
          fixed.emplace_back(
              f.x_col[static_cast<std::size_t>(l)][static_cast<std::size_t>(ch)],
              (xmask >> (l * m + ch)) & 1 ? 1.0 : 0.0);
      for (const auto& [node_ch, col] : f.node_channel_col) {
        const bool used = node_channels.count(node_ch.first) > 0 &&
                          node_channels.at(node_ch.first).count(node_ch.second) > 0;
        fixed.emplace_back(col, used ? 1.0 : 0.0);
      }
      if (solve_lp(warm_fix(f.model, fixed)).status == LpStatus::Optimal) {
        best = cost;
        break;  // schedules only gate feasibility; cost depends on y alone
      }
    }
  }
  return best;
}

}  // namespace backhaul::testsupport
