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

#include "backhaul/io/dot_export.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace backhaul::io {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string export_graph(const core::DeploymentPlan& plan, const core::Topology& t,
                         PlanMode mode) {
  std::ostringstream os;
  os << "digraph backhaul {\n";
  os << "  rankdir=LR;\n";
  for (const core::Node& n : t.nodes) {
    os << "  n" << n.id << " [";
    switch (n.kind) {
      case core::NodeKind::Edge:
        os << "shape=ellipse, label=\"EN " << n.id << "\\n" << fmt(n.demand_bps / 1e6)
           << " Mbps\"";
        if (std::find(plan.infeasible_ens.begin(), plan.infeasible_ens.end(), n.id) !=
            plan.infeasible_ens.end())
          os << ", color=orange, penwidth=2";
        break;
      case core::NodeKind::AggregatorCandidate:
        os << "shape=box, label=\"AN " << n.id << "\"";
        if (std::binary_search(plan.selected_ans.begin(), plan.selected_ans.end(), n.id))
          os << ", style=filled, fillcolor=palegreen, penwidth=2";
        else
          os << ", style=dashed";
        break;
      case core::NodeKind::Gateway:
        os << "shape=doublecircle, label=\"GN " << n.id << "\"";
        break;
    }
    os << "];\n";
  }
  for (const auto& [key, flow] : plan.flows) {
    os << "  n" << key.from << " -> n" << key.to << " [label=\"";
    const core::Node& from = t.node(key.from);
    if (from.kind == core::NodeKind::AggregatorCandidate) {
      os << "60GHz";
    } else if (mode == PlanMode::Sub6) {
      os << "5.8GHz";
      auto it = plan.en_channel_alloc.find(key);
      if (it != plan.en_channel_alloc.end()) {
        os << " ch";
        bool first = true;
        for (const core::ChannelAlloc& c : it->second) {
          os << (first ? "" : ",") << c.channel;
          first = false;
        }
      }
    } else if (mode == PlanMode::Microwave) {
      os << "28GHz";
    } else {
      os << "assign";
    }
    os << " " << fmt(flow / 1e6) << " Mbps\"";
    if (from.kind == core::NodeKind::AggregatorCandidate) os << ", style=dashed, color=blue";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

void write_graph(const core::DeploymentPlan& plan, const core::Topology& t, PlanMode mode,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out << export_graph(plan, t, mode);
}

}  // namespace backhaul::io
