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

#include "backhaul/io/plan_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace backhaul::io {
namespace {

using nlohmann::ordered_json;

const char* mode_name(PlanMode mode) {
  switch (mode) {
    case PlanMode::Microwave: return "microwave";
    case PlanMode::Sub6: return "sub6";
    default: return "greedy";
  }
}

}  // namespace

std::string serialize_plan(const core::DeploymentPlan& plan,
                           const repair::RepairReport* report, const SolverStats& stats,
                           PlanMode mode) {
  ordered_json doc;
  doc["mode"] = mode_name(mode);
  doc["objective"] = plan.objective;
  doc["lower_bound"] = plan.lower_bound;
  doc["gap"] = plan.gap;
  doc["selected_ans"] = plan.selected_ans;
  doc["infeasible_ens"] = plan.infeasible_ens;

  doc["flows"] = ordered_json::array();
  for (const auto& [key, flow] : plan.flows) {
    ordered_json jf;
    jf["from"] = key.from;
    jf["to"] = key.to;
    jf["mbps"] = flow / 1e6;
    doc["flows"].push_back(jf);
  }
  doc["en_link_alloc"] = ordered_json::array();
  for (const auto& [key, alloc] : plan.en_link_alloc) {
    ordered_json ja;
    ja["from"] = key.from;
    ja["to"] = key.to;
    ja["bandwidth_mhz"] = alloc.bandwidth_hz / 1e6;
    ja["power_w"] = alloc.power_w;
    doc["en_link_alloc"].push_back(ja);
  }
  doc["en_channel_alloc"] = ordered_json::array();
  for (const auto& [key, channels] : plan.en_channel_alloc) {
    ordered_json ja;
    ja["from"] = key.from;
    ja["to"] = key.to;
    ja["channels"] = ordered_json::array();
    for (const core::ChannelAlloc& c : channels) {
      ordered_json jc;
      jc["channel"] = c.channel;
      jc["power_w"] = c.power_w;
      ja["channels"].push_back(jc);
    }
    doc["en_channel_alloc"].push_back(ja);
  }
  doc["an_gn_alloc"] = ordered_json::array();
  for (const auto& [key, alloc] : plan.an_gn_alloc) {
    ordered_json ja;
    ja["from"] = key.from;
    ja["to"] = key.to;
    ja["bandwidth_mhz"] = alloc.bandwidth_hz / 1e6;
    ja["power_w"] = alloc.power_w;
    doc["an_gn_alloc"].push_back(ja);
  }

  if (report != nullptr) {
    ordered_json jr;
    jr["iterations_used"] = report->iterations_used;
    jr["en_status"] = ordered_json::object();
    for (const auto& [en, status] : report->en_status)
      jr["en_status"][std::to_string(en)] = repair::to_string(status);
    doc["repair"] = jr;
  }

  ordered_json js;
  js["status"] = stats.status;
  js["nodes_explored"] = stats.nodes_explored;
  js["gap"] = stats.gap;
  js["lp_iterations"] = stats.lp_iterations;
  doc["solver"] = js;
  return doc.dump(2) + "\n";
}

void write_plan(const core::DeploymentPlan& plan, const repair::RepairReport* report,
                const SolverStats& stats, PlanMode mode, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write plan file: " + path);
  out << serialize_plan(plan, report, stats, mode);
}

}  // namespace backhaul::io
