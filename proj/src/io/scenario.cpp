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

#include "backhaul/io/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "backhaul/capacity/capacity.hpp"
#include "backhaul/greedy/greedy.hpp"
#include "backhaul/io/dot_export.hpp"

namespace backhaul::io {
namespace {

using core::BandId;
using core::NodeId;
using core::Topology;

// Provable per-EN service bound. The capacity function is concave and
// 1-homogeneous, so pooling the whole radio budget on the best-gain link
// upper-bounds any split; a receiver is only usable if it can forward
// (gateway, or candidate with a 60 GHz path).
double service_upper_bound_bps(const Topology& t, NodeId en, PlanMode mode) {
  auto receiver_usable = [&](const core::Node& n) {
    if (n.kind == core::NodeKind::Gateway) return true;
    if (n.kind != core::NodeKind::AggregatorCandidate) return false;
    for (NodeId g : t.gateways())
      if (t.gains.get(BandId::MmWave, n.id, g).value_or(0.0) >= t.gain_floor) return true;
    return false;
  };
  double best = 0.0;
  if (mode == PlanMode::Microwave) {
    const core::BandProfile& band = t.microwave;
    for (const core::Node& n : t.nodes) {
      if (n.kind == core::NodeKind::Edge || !receiver_usable(n)) continue;
      const auto g = t.gains.get(BandId::Microwave, en, n.id);
      if (!g.has_value() || *g < t.gain_floor) continue;
      capacity::CapacityFn fn{*g, band.noise_spectral_density_w_per_hz};
      best = std::max(best, capacity::capacity(fn, band.max_power_per_radio_w,
                                               band.max_bandwidth_per_radio_hz));
    }
  } else {
    const core::BandProfile& band = t.sub6;
    double best_channel = 0.0;
    for (const core::Node& n : t.nodes) {
      if (n.kind == core::NodeKind::Edge || !receiver_usable(n)) continue;
      for (int m = 0; m < band.num_channels; ++m) {
        const auto g = t.gains.get_channel(BandId::Sub6, en, n.id, m);
        if (!g.has_value() || *g < t.gain_floor) continue;
        capacity::CapacityFn fn{*g / t.capacity_gap_linear,
                                band.noise_spectral_density_w_per_hz};
        best_channel = std::max(best_channel,
                                capacity::capacity(fn, band.max_power_per_radio_w,
                                                   band.channel_width_hz));
      }
    }
    best = best_channel * std::min(t.node(en).max_radios, band.num_channels);
  }
  return best;
}

struct SubTopology {
  Topology topo;
  std::vector<NodeId> to_original;
};

SubTopology make_subtopology(const Topology& t, const std::vector<NodeId>& keep) {
  SubTopology out;
  std::map<NodeId, NodeId> to_local;
  for (std::size_t idx = 0; idx < keep.size(); ++idx) {
    to_local[keep[idx]] = static_cast<NodeId>(idx);
    core::Node n = t.node(keep[idx]);
    n.id = static_cast<NodeId>(idx);
    out.topo.nodes.push_back(n);
    out.to_original.push_back(keep[idx]);
  }
  out.topo.sub6 = t.sub6;
  out.topo.microwave = t.microwave;
  out.topo.mmwave = t.mmwave;
  out.topo.sdma_order = t.sdma_order;
  out.topo.interference_threshold_w = t.interference_threshold_w;
  out.topo.capacity_gap_linear = t.capacity_gap_linear;
  out.topo.gain_floor = t.gain_floor;
  for (BandId band : {BandId::Sub6, BandId::Microwave, BandId::MmWave}) {
    for (const auto& e : t.gains.entries(band)) {
      auto a = to_local.find(e.from);
      auto b = to_local.find(e.to);
      if (a == to_local.end() || b == to_local.end()) continue;
      out.topo.gains.set(band, a->second, b->second, e.gain);
    }
    for (const auto& e : t.gains.channel_entries(band)) {
      auto a = to_local.find(e.from);
      auto b = to_local.find(e.to);
      if (a == to_local.end() || b == to_local.end()) continue;
      out.topo.gains.set_channel(band, a->second, b->second, e.channel, e.gain);
    }
  }
  return out;
}

core::DeploymentPlan translate_plan(const core::DeploymentPlan& plan,
                                    const std::vector<NodeId>& to_original) {
  auto tr = [&](NodeId local) { return to_original[static_cast<std::size_t>(local)]; };
  core::DeploymentPlan out;
  out.objective = plan.objective;
  out.lower_bound = plan.lower_bound;
  out.gap = plan.gap;
  for (NodeId j : plan.selected_ans) out.selected_ans.push_back(tr(j));
  for (NodeId i : plan.infeasible_ens) out.infeasible_ens.push_back(tr(i));
  std::sort(out.selected_ans.begin(), out.selected_ans.end());
  std::sort(out.infeasible_ens.begin(), out.infeasible_ens.end());
  for (const auto& [key, v] : plan.flows) out.flows[{tr(key.from), tr(key.to)}] = v;
  for (const auto& [key, v] : plan.en_link_alloc)
    out.en_link_alloc[{tr(key.from), tr(key.to)}] = v;
  for (const auto& [key, v] : plan.en_channel_alloc)
    out.en_channel_alloc[{tr(key.from), tr(key.to)}] = v;
  for (const auto& [key, v] : plan.an_gn_alloc)
    out.an_gn_alloc[{tr(key.from), tr(key.to)}] = v;
  return out;
}

}  // namespace

ScenarioResult run_scenario(const Topology& t, const ScenarioConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> violations = core::validate_topology(t);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid topology:";
    for (const std::string& v : violations) os << "\n  - " << v;
    throw ValidationError(os.str());
  }

  ScenarioResult result;

  if (cfg.mode == PlanMode::Greedy) {
    greedy::GreedyStats gstats;
    result.plan = greedy::greedy_place(t, cfg.greedy_band, &gstats);
    result.stats.status = "greedy";
    result.stats.nodes_explored = gstats.operations;
    result.stats.gap = result.plan.gap;
  } else {
    const form::Mode mode =
        cfg.mode == PlanMode::Microwave ? form::Mode::Microwave : form::Mode::Sub6;

    // Provably unservable ENs are set aside before the solve; the candidate
    // set never grows, so they can only stay infeasible.
    std::vector<NodeId> pre_infeasible;
    std::vector<NodeId> keep;
    for (const core::Node& n : t.nodes) {
      if (n.kind == core::NodeKind::Edge) {
        const double bound = service_upper_bound_bps(t, n.id, cfg.mode);
        if (bound < n.demand_bps * (1.0 - 1e-9)) {
          pre_infeasible.push_back(n.id);
          continue;
        }
      }
      keep.push_back(n.id);
    }
    SubTopology sub = make_subtopology(t, keep);

    form::Formulation f = form::Formulation::build(sub.topo, mode, cfg.grid_kp, cfg.grid_kw);
    if (cfg.dump_milp) {
      std::ostringstream os;
      f.model().dump_lp(os);
      result.milp_dump = os.str();
    }

    repair::RepairConfig rcfg;
    rcfg.max_iterations = cfg.repair_max_iterations;
    rcfg.skip_refine = cfg.skip_refine;
    rcfg.gap_target = cfg.gap_target;
    rcfg.time_limit_s = cfg.time_limit_s;
    rcfg.deterministic = cfg.deterministic;

    std::vector<NodeId> underserved;
    milp::BnbResult sol = repair::solve_with_fallback(f, sub.topo, rcfg, &underserved);
    if (!sol.incumbent.has_value())
      throw NoIncumbentError("solver returned no incumbent (status " +
                             std::to_string(static_cast<int>(sol.status)) + ")");
    core::DeploymentPlan plan0 = f.extract(sol, sub.topo);
    repair::RepairReport report = repair::repair(plan0, f, sol, sub.topo, rcfg);

    // Back to original ids, folding in the pre-filtered ENs.
    repair::RepairReport full;
    full.iterations_used = report.iterations_used;
    full.final_plan = translate_plan(report.final_plan, sub.to_original);
    for (const auto& [en, status] : report.en_status)
      full.en_status[sub.to_original[static_cast<std::size_t>(en)]] = status;
    for (NodeId i : pre_infeasible) {
      full.en_status[i] = repair::EnRepairStatus::Infeasible;
      full.final_plan.infeasible_ens.push_back(i);
    }
    std::sort(full.final_plan.infeasible_ens.begin(),
              full.final_plan.infeasible_ens.end());

    result.plan = full.final_plan;
    result.report = std::move(full);
    result.stats.nodes_explored = sol.nodes_explored;
    result.stats.gap = result.plan.gap;
    result.stats.status = sol.status == milp::BnbStatus::Optimal      ? "optimal"
                          : sol.status == milp::BnbStatus::GapReached ? "gap_reached"
                          : sol.status == milp::BnbStatus::TimeLimit  ? "time_limit"
                                                                      : "infeasible";
  }

  const std::vector<std::string> issues =
      verify_plan(result.plan, t, cfg.mode, cfg.greedy_band);
  if (!issues.empty()) {
    std::ostringstream os;
    os << "post-hoc verification failed:";
    for (const std::string& v : issues) os << "\n  - " << v;
    throw VerificationError(os.str());
  }

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_outputs(const ScenarioResult& result, const Topology& t,
                   const ScenarioConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const repair::RepairReport* report =
      result.report.has_value() ? &*result.report : nullptr;
  write_plan(result.plan, report, result.stats, cfg.mode,
             (std::filesystem::path(out_dir) / "plan.json").string());
  write_graph(result.plan, t, cfg.mode,
              (std::filesystem::path(out_dir) / "plan.dot").string());
  if (cfg.dump_milp && !result.milp_dump.empty()) {
    std::ofstream lp((std::filesystem::path(out_dir) / "milp.lp").string());
    if (!lp) throw std::runtime_error("cannot write milp.lp");
    lp << result.milp_dump;
  }
}

}  // namespace backhaul::io
