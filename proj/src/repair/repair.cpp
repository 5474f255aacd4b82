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

#include "backhaul/repair/repair.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "backhaul/capacity/capacity.hpp"

namespace backhaul::repair {
namespace {

constexpr double kServeTol = 1e-6;     // relative demand tolerance
constexpr double kCapViolTol = 1e-6;   // relative capacity tolerance
constexpr double kKelleyTol = 5e-7;    // adaptive pass converges below the check
constexpr int kKelleyRounds = 50;
constexpr double kTiny = 1e-12;

using core::BandId;
using core::DeploymentPlan;
using core::LinkKey;
using core::NodeId;
using core::Topology;

double flow_sum_from(const DeploymentPlan& plan, NodeId en) {
  double acc = 0.0;
  for (const auto& [key, flow] : plan.flows)
    if (key.from == en) acc += flow;
  return acc;
}

bool en_served(const DeploymentPlan& plan, const Topology& t, NodeId en) {
  return flow_sum_from(plan, en) >= t.node(en).demand_bps * (1.0 - kServeTol);
}

}  // namespace

const char* to_string(EnRepairStatus s) {
  switch (s) {
    case EnRepairStatus::FeasibleAsIs: return "feasible_as_is";
    case EnRepairStatus::RepairedByRefinement: return "repaired_by_refinement";
    case EnRepairStatus::RepairedBySpareBandwidth: return "repaired_by_spare_bandwidth";
    case EnRepairStatus::DeferredToIteration: return "deferred_to_iteration";
    case EnRepairStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

double true_link_capacity(const DeploymentPlan& plan, const Topology& t, Mode mode,
                          const LinkKey& key) {
  const core::Node& from = t.node(key.from);
  if (from.kind == core::NodeKind::AggregatorCandidate) {
    auto it = plan.an_gn_alloc.find(key);
    if (it == plan.an_gn_alloc.end()) return 0.0;
    const auto gain = t.gains.get(BandId::MmWave, key.from, key.to);
    if (!gain.has_value()) return 0.0;
    capacity::CapacityFn fn{*gain, t.mmwave.noise_spectral_density_w_per_hz};
    return capacity::capacity(fn, it->second.power_w, it->second.bandwidth_hz);
  }
  if (mode == Mode::Microwave) {
    auto it = plan.en_link_alloc.find(key);
    if (it == plan.en_link_alloc.end()) return 0.0;
    const auto gain = t.gains.get(BandId::Microwave, key.from, key.to);
    if (!gain.has_value()) return 0.0;
    capacity::CapacityFn fn{*gain, t.microwave.noise_spectral_density_w_per_hz};
    return capacity::capacity(fn, it->second.power_w, it->second.bandwidth_hz);
  }
  auto it = plan.en_channel_alloc.find(key);
  if (it == plan.en_channel_alloc.end()) return 0.0;
  double acc = 0.0;
  for (const core::ChannelAlloc& c : it->second) {
    const auto gain = t.gains.get_channel(BandId::Sub6, key.from, key.to, c.channel);
    if (!gain.has_value()) continue;
    capacity::CapacityFn fn{*gain / t.capacity_gap_linear,
                            t.sub6.noise_spectral_density_w_per_hz};
    acc += capacity::capacity(fn, c.power_w, t.sub6.channel_width_hz);
  }
  return acc;
}

std::vector<LinkKey> check_true_capacity(const DeploymentPlan& plan, const Topology& t,
                                         Mode mode) {
  std::vector<LinkKey> violated;
  for (const auto& [key, flow] : plan.flows) {
    if (flow <= 0.0) continue;
    const double cap = true_link_capacity(plan, t, mode, key);
    if (flow > cap + kCapViolTol * flow) violated.push_back(key);
  }
  return violated;
}

milp::BnbResult refine_and_resolve(form::Formulation& f, const Topology& t, double factor,
                                   const milp::BnbResult& prior, const RepairConfig& cfg) {
  const int new_kp = std::max(1, static_cast<int>(std::lround(f.k_p * factor)));
  const int new_kw = std::max(1, static_cast<int>(std::lround(f.k_w * factor)));
  f.rebuild(t, new_kp, new_kw);

  milp::BnbOptions opts;
  opts.gap_target = cfg.gap_target;
  opts.time_limit_s = cfg.time_limit_s;
  opts.deterministic = cfg.deterministic;

  std::optional<milp::WarmStart> warm;
  if (prior.incumbent.has_value()) {
    // The tightened model may reject the old allocation but the binary
    // assignment usually survives; revalidate it with a plain LP.
    const auto fixed = f.binary_assignment(*prior.incumbent);
    const milp::MilpModel pinned = milp::warm_fix(f.model(), fixed);
    const milp::LpResult lp = milp::solve_lp(pinned);
    if (lp.status == milp::LpStatus::Optimal)
      warm = milp::WarmStart{lp.x, f.model().objective_value(lp.x)};
  }
  return milp::branch_and_bound(f.model(), opts, warm);
}

namespace {

// ---------------------------------------------------------------------------
// Spare-bandwidth pass: fixed binaries, continuous re-optimization against
// the true capacity via adaptive tangent cuts.
// ---------------------------------------------------------------------------

struct SpareLink {
  core::DirectedLink link;
  capacity::CapacityFn fn;   // SI
  double p_unit = 0.0;
  double w_unit = 0.0;       // 0 for fixed-bandwidth (per-channel) entries
  double w_fixed_hz = 0.0;   // channel width when w_unit == 0
  int channel = -1;
  int f_col = -1;            // flow carrying this entry (shared across channels)
  int p_col = -1;
  int w_col = -1;            // -1 in channel mode
  int c_col = -1;            // per-channel capacity var in channel mode
};

struct SpareProblem {
  milp::MilpModel model;
  std::vector<SpareLink> entries;
  std::vector<NodeId> ens;
  std::vector<int> shortfall_col;           // parallel to ens
  std::map<LinkKey, int> flow_col;          // per link
};

void add_entry_cut(SpareProblem& sp, const SpareLink& e, double p_w, double w_hz,
                   int serial) {
  const std::string name = "adapt_" + std::to_string(e.link.from) + "_" +
                           std::to_string(e.link.to) + "_c" +
                           std::to_string(e.channel) + "_" + std::to_string(serial);
  if (e.w_col >= 0) {
    const double p0 = std::max(p_w, kTiny);
    const double w0 = std::max(w_hz, e.w_unit * 1e-9);
    sp.model.add_row(form::scaled_cut_row(capacity::tangent_cut_at(e.fn, p0, w0),
                                          e.f_col, e.p_col, e.w_col, e.p_unit, e.w_unit,
                                          false, name));
  } else {
    const double p0 = std::max(p_w, 0.0);
    sp.model.add_row(form::scaled_cut_row(
        capacity::tangent_cut_fixed_bandwidth_at(e.fn, e.w_fixed_hz, p0), e.c_col,
        e.p_col, -1, e.p_unit, e.w_fixed_hz, false, name));
  }
}

// True capacity of one entry at the current solution, in Mbps.
double entry_capacity_mbps(const SpareLink& e, const std::vector<double>& x) {
  const double p = x[static_cast<std::size_t>(e.p_col)] * e.p_unit;
  const double w = e.w_col >= 0 ? x[static_cast<std::size_t>(e.w_col)] * e.w_unit
                                : e.w_fixed_hz;
  return capacity::capacity(e.fn, p, w) / form::kFlowUnitBps;
}

struct SpareBuildResult {
  SpareProblem sp;
  bool ok = false;
};

SpareBuildResult build_spare_problem(const DeploymentPlan& plan, const form::Formulation& f,
                                     const Topology& t,
                                     const std::vector<double>* raw_incumbent) {
  SpareBuildResult out;
  SpareProblem& sp = out.sp;
  const std::vector<NodeId> selected = plan.selected_ans;
  auto is_active_receiver = [&](NodeId id) {
    const core::Node& n = t.node(id);
    if (n.kind == core::NodeKind::Gateway) return true;
    if (n.kind != core::NodeKind::AggregatorCandidate) return false;
    return std::binary_search(selected.begin(), selected.end(), id);
  };

  sp.ens = t.edge_nodes();

  // Flow and per-entry variables. Microwave mode: one (f, w, p) triple per
  // active link. Sub-6 mode: f per link plus (p, c) per scheduled channel.
  if (f.mode == Mode::Microwave) {
    const core::BandProfile& band = t.microwave;
    for (const core::DirectedLink& link : core::uplink_adjacency(t, BandId::Microwave)) {
      if (!is_active_receiver(link.to)) continue;
      const double demand_mbps = t.node(link.from).demand_bps / form::kFlowUnitBps;
      SpareLink e;
      e.link = link;
      e.fn = capacity::CapacityFn{*t.gains.get(BandId::Microwave, link.from, link.to),
                                  band.noise_spectral_density_w_per_hz};
      e.p_unit = band.max_power_per_radio_w;
      e.w_unit = band.max_bandwidth_per_radio_hz;
      e.f_col = sp.model.add_var({"f28", link.from, link.to}, milp::VarKind::Continuous,
                                 0.0, demand_mbps);
      e.w_col = sp.model.add_var({"w28", link.from, link.to}, milp::VarKind::Continuous,
                                 0.0, 1.0);
      e.p_col = sp.model.add_var({"p28", link.from, link.to}, milp::VarKind::Continuous,
                                 0.0, 1.0);
      sp.flow_col[LinkKey{link.from, link.to}] = e.f_col;
      sp.entries.push_back(e);
    }
  } else {
    const core::BandProfile& band = t.sub6;
    const form::Sub6Formulation& s6 = *f.sub6;
    // Scheduled channels per link.
    std::map<LinkKey, std::vector<int>> schedule;
    if (raw_incumbent != nullptr) {
      for (std::size_t l = 0; l < s6.en_links.size(); ++l) {
        const LinkKey key{s6.en_links[l].from, s6.en_links[l].to};
        for (int m = 0; m < s6.num_channels; ++m)
          if ((*raw_incumbent)[static_cast<std::size_t>(s6.x_col[l][m])] > 0.5)
            schedule[key].push_back(m);
      }
    } else {
      for (const auto& [key, channels] : plan.en_channel_alloc)
        for (const core::ChannelAlloc& c : channels) schedule[key].push_back(c.channel);
    }

    for (const auto& [key, channels] : schedule) {
      if (channels.empty() || !is_active_receiver(key.to)) continue;
      const double demand_mbps = t.node(key.from).demand_bps / form::kFlowUnitBps;
      const int f_col = sp.model.add_var({"f58", key.from, key.to},
                                         milp::VarKind::Continuous, 0.0, demand_mbps);
      sp.flow_col[key] = f_col;
      for (int m : channels) {
        const double gain =
            t.gains.get_channel(BandId::Sub6, key.from, key.to, m).value_or(0.0);
        if (gain < t.gain_floor) continue;
        SpareLink e;
        e.link = core::DirectedLink{key.from, key.to};
        e.channel = m;
        e.fn = capacity::CapacityFn{gain / t.capacity_gap_linear,
                                    band.noise_spectral_density_w_per_hz};
        e.p_unit = band.max_power_per_radio_w;
        e.w_fixed_hz = band.channel_width_hz;
        e.f_col = f_col;

        // Fixed-schedule protocol interference: co-channel victims cap this
        // transmitter outright.
        double p_hi = 1.0;
        for (const auto& [vkey, vchannels] : schedule) {
          if (vkey.from == key.from || vkey.to == key.to) continue;
          if (!is_active_receiver(vkey.to)) continue;
          if (std::find(vchannels.begin(), vchannels.end(), m) == vchannels.end())
            continue;
          const auto g_kj = t.gains.get_channel(BandId::Sub6, key.from, vkey.to, m);
          if (!g_kj.has_value() || *g_kj < t.gain_floor) continue;
          p_hi = std::min(p_hi, t.interference_threshold_w /
                                    (*g_kj * band.max_power_per_radio_w));
        }
        // Residual rounds: accepted receptions elsewhere cap it too.
        if (auto it = t.residual.find(key.from); it != t.residual.end()) {
          auto caps = it->second.tx_power_caps_w.find(m);
          if (caps != it->second.tx_power_caps_w.end()) {
            for (const auto& [receiver, cap_w] : caps->second) {
              if (receiver == key.to) continue;
              p_hi = std::min(p_hi, cap_w / band.max_power_per_radio_w);
            }
          }
        }
        p_hi = std::max(0.0, p_hi);
        e.p_col = sp.model.add_var({"p58", key.from, key.to, m},
                                   milp::VarKind::Continuous, 0.0, p_hi);
        const double cap_max =
            capacity::capacity(e.fn, band.max_power_per_radio_w, band.channel_width_hz) /
            form::kFlowUnitBps;
        e.c_col = sp.model.add_var({"c58", key.from, key.to, m},
                                   milp::VarKind::Continuous, 0.0, cap_max);
        sp.entries.push_back(e);
      }
    }
  }

  // 60 GHz legs for deployed ANs.
  const core::BandProfile& mm = t.mmwave;
  for (const core::DirectedLink& link : core::uplink_adjacency(t, BandId::MmWave)) {
    if (!std::binary_search(selected.begin(), selected.end(), link.from)) continue;
    SpareLink e;
    e.link = link;
    e.fn = capacity::CapacityFn{*t.gains.get(BandId::MmWave, link.from, link.to),
                                mm.noise_spectral_density_w_per_hz};
    e.p_unit = mm.max_power_per_radio_w;
    e.w_unit = mm.max_bandwidth_per_radio_hz;
    double total_demand = 0.0;
    for (NodeId i : sp.ens) total_demand += t.node(i).demand_bps / form::kFlowUnitBps;
    e.f_col = sp.model.add_var({"f60", link.from, link.to}, milp::VarKind::Continuous,
                               0.0, total_demand);
    e.w_col = sp.model.add_var({"w60", link.from, link.to}, milp::VarKind::Continuous,
                               0.0, 1.0);
    e.p_col = sp.model.add_var({"p60", link.from, link.to}, milp::VarKind::Continuous,
                               0.0, 1.0);
    sp.flow_col[LinkKey{link.from, link.to}] = e.f_col;
    sp.entries.push_back(e);
  }

  // Shortfall objective: serve as much demand as the fixed binaries allow.
  for (NodeId i : sp.ens) {
    const double demand_mbps = t.node(i).demand_bps / form::kFlowUnitBps;
    const int s = sp.model.add_var({"short", i}, milp::VarKind::Continuous, 0.0,
                                   demand_mbps);
    sp.shortfall_col.push_back(s);
    sp.model.set_objective(s, 1.0);
    milp::Row row;
    row.sense = milp::RowSense::Equal;
    row.rhs = demand_mbps;
    row.name = "en_balance_" + std::to_string(i);
    row.terms.push_back({s, 1.0});
    for (const auto& [key, col] : sp.flow_col)
      if (key.from == i) row.terms.push_back({col, 1.0});
    sp.model.add_row(row);
  }

  // AN balance and budget rows.
  for (NodeId j : selected) {
    milp::Row row;
    row.sense = milp::RowSense::Equal;
    row.rhs = 0.0;
    row.name = "an_balance_" + std::to_string(j);
    for (const auto& [key, col] : sp.flow_col) {
      if (key.to == j) row.terms.push_back({col, 1.0});
      if (key.from == j) row.terms.push_back({col, -1.0});
    }
    if (!row.terms.empty()) sp.model.add_row(row);
  }

  if (f.mode == Mode::Microwave) {
    // EN radio budgets and receiver inbound-bandwidth caps.
    for (NodeId i : sp.ens) {
      milp::Row wrow, prow;
      wrow.sense = prow.sense = milp::RowSense::LessEqual;
      wrow.rhs = prow.rhs = 1.0;
      wrow.name = "en_bw_" + std::to_string(i);
      prow.name = "en_pw_" + std::to_string(i);
      for (const SpareLink& e : sp.entries) {
        if (e.link.from != i || e.w_col < 0) continue;
        wrow.terms.push_back({e.w_col, 1.0});
        prow.terms.push_back({e.p_col, 1.0});
      }
      if (!wrow.terms.empty()) {
        sp.model.add_row(wrow);
        sp.model.add_row(prow);
      }
    }
    for (const core::Node& n : t.nodes) {
      if (n.kind == core::NodeKind::Edge) continue;
      milp::Row row;
      row.sense = milp::RowSense::LessEqual;
      double rhs = static_cast<double>(n.max_radios);
      if (auto it = t.residual.find(n.id); it != t.residual.end())
        rhs -= it->second.used_inbound_bw_hz / t.microwave.max_bandwidth_per_radio_hz;
      row.rhs = rhs;
      row.name = "inbw_" + std::to_string(n.id);
      for (const SpareLink& e : sp.entries) {
        if (e.link.to != n.id || e.w_col < 0) continue;
        if (t.node(e.link.from).kind != core::NodeKind::Edge) continue;
        row.terms.push_back({e.w_col, 1.0});
      }
      if (!row.terms.empty()) sp.model.add_row(row);
    }
  } else {
    // Sub-6: per-link flow is bounded by the per-channel capacity variables.
    for (const auto& [key, fcol] : sp.flow_col) {
      if (t.node(key.from).kind != core::NodeKind::Edge) continue;
      milp::Row row;
      row.sense = milp::RowSense::LessEqual;
      row.rhs = 0.0;
      row.name = "flow_cap_" + std::to_string(key.from) + "_" + std::to_string(key.to);
      row.terms.push_back({fcol, 1.0});
      for (const SpareLink& e : sp.entries)
        if (e.c_col >= 0 && e.link.from == key.from && e.link.to == key.to)
          row.terms.push_back({e.c_col, -1.0});
      sp.model.add_row(row);
    }
  }
  // 60 GHz per-AN budgets.
  for (NodeId j : selected) {
    milp::Row wrow, prow;
    wrow.sense = prow.sense = milp::RowSense::LessEqual;
    wrow.rhs = prow.rhs = 1.0;
    wrow.name = "an60_bw_" + std::to_string(j);
    prow.name = "an60_pw_" + std::to_string(j);
    for (const SpareLink& e : sp.entries) {
      if (e.link.from != j || e.w_col < 0) continue;
      wrow.terms.push_back({e.w_col, 1.0});
      prow.terms.push_back({e.p_col, 1.0});
    }
    if (!wrow.terms.empty()) {
      sp.model.add_row(wrow);
      sp.model.add_row(prow);
    }
  }

  // Seed cuts: coarse tangent families per entry.
  int serial = 0;
  for (const SpareLink& e : sp.entries) {
    if (e.w_col >= 0) {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          add_entry_cut(sp, e, e.p_unit / std::exp2(3.0 - a),
                        e.w_unit / std::exp2(3.0 - b), serial++);
    } else {
      for (int a = 0; a < 6; ++a)
        add_entry_cut(sp, e, e.p_unit / std::exp2(5.0 - a), e.w_fixed_hz, serial++);
    }
  }
  out.ok = true;
  return out;
}

}  // namespace

SparePassResult spare_bandwidth_pass(const DeploymentPlan& plan, const form::Formulation& f,
                                     const Topology& t,
                                     const std::vector<double>* raw_incumbent) {
  SparePassResult result;

  // Fixed point: an allocation that already serves everything it owes and
  // respects true capacity is returned unchanged.
  bool all_served = true;
  for (NodeId i : t.edge_nodes()) {
    const bool listed_infeasible =
        std::find(plan.infeasible_ens.begin(), plan.infeasible_ens.end(), i) !=
        plan.infeasible_ens.end();
    if (!listed_infeasible && !en_served(plan, t, i)) all_served = false;
  }
  if (all_served && check_true_capacity(plan, t, f.mode).empty()) {
    result.converged = true;
    result.plan = plan;
    result.unserved_ens = plan.infeasible_ens;
    return result;
  }

  SpareBuildResult build = build_spare_problem(plan, f, t, raw_incumbent);
  SpareProblem& sp = build.sp;

  milp::LpOptions lp_opts;
  std::vector<double> x;
  int serial = 100000;
  auto adaptive_solve = [&]() -> bool {
    for (int round = 0; round < kKelleyRounds; ++round) {
      ++result.rounds;
      const milp::LpResult lp = milp::solve_lp(sp.model, lp_opts);
      if (lp.status != milp::LpStatus::Optimal) return false;
      x = lp.x;
      bool any_violation = false;
      // Per-flow violation: compare against the summed true capacity.
      for (const auto& [key, fcol] : sp.flow_col) {
        const double flow = x[static_cast<std::size_t>(fcol)];
        if (flow <= kTiny) continue;
        double cap = 0.0;
        for (const SpareLink& e : sp.entries)
          if (e.f_col == fcol) cap += entry_capacity_mbps(e, x);
        if (flow > cap * (1.0 + kKelleyTol) + kTiny) {
          any_violation = true;
          for (const SpareLink& e : sp.entries) {
            if (e.f_col != fcol) continue;
            const double p = x[static_cast<std::size_t>(e.p_col)] * e.p_unit;
            const double w = e.w_col >= 0
                                 ? x[static_cast<std::size_t>(e.w_col)] * e.w_unit
                                 : e.w_fixed_hz;
            add_entry_cut(sp, e, p, w, serial++);
          }
        }
      }
      if (!any_violation) return true;
    }
    return false;
  };

  if (!adaptive_solve()) {
    result.converged = false;
    result.plan = plan;
    for (NodeId i : t.edge_nodes()) result.unserved_ens.push_back(i);
    return result;
  }

  // The shortfall optimum may spread capacity across several partially
  // served nodes. Demands are all-or-nothing, so commit the fully served
  // ones, then try to complete each partial node; nodes that cannot be
  // completed are taken out entirely so the accepted allocation balances.
  std::vector<NodeId> unserved;
  auto exclude_en = [&](std::size_t k) {
    const double demand_mbps = t.node(sp.ens[k]).demand_bps / form::kFlowUnitBps;
    milp::VarRef& s = sp.model.var(sp.shortfall_col[k]);
    s.lo = demand_mbps;
    s.hi = demand_mbps;
    for (const auto& [key, col] : sp.flow_col) {
      if (key.from != sp.ens[k]) continue;
      milp::VarRef& fv = sp.model.var(col);
      fv.lo = 0.0;
      fv.hi = 0.0;
    }
    unserved.push_back(sp.ens[k]);
  };

  std::vector<std::size_t> partial;
  for (std::size_t k = 0; k < sp.ens.size(); ++k) {
    const double demand_mbps = t.node(sp.ens[k]).demand_bps / form::kFlowUnitBps;
    if (x[static_cast<std::size_t>(sp.shortfall_col[k])] > kServeTol * demand_mbps)
      partial.push_back(k);
    else
      sp.model.var(sp.shortfall_col[k]).hi = 0.0;
  }
  if (!partial.empty() && !adaptive_solve()) {
    result.converged = false;
    result.plan = plan;
    for (std::size_t k : partial) result.unserved_ens.push_back(sp.ens[k]);
    return result;
  }
  for (std::size_t k : partial) {
    milp::VarRef& s = sp.model.var(sp.shortfall_col[k]);
    const double saved_hi = s.hi;
    s.hi = 0.0;
    if (adaptive_solve()) continue;  // completed in full
    s.hi = saved_hi;
    exclude_en(k);
    if (!adaptive_solve()) {
      result.converged = false;
      result.plan = plan;
      result.unserved_ens = unserved;
      return result;
    }
  }

  // Build the repaired allocation.
  DeploymentPlan repaired;
  repaired.selected_ans = plan.selected_ans;
  repaired.objective = plan.objective;
  repaired.lower_bound = plan.lower_bound;
  repaired.gap = plan.gap;
  for (const auto& [key, fcol] : sp.flow_col) {
    const double flow = x[static_cast<std::size_t>(fcol)];
    if (flow > 1e-9) repaired.flows[key] = flow * form::kFlowUnitBps;
  }
  for (const SpareLink& e : sp.entries) {
    const LinkKey key{e.link.from, e.link.to};
    const double p = x[static_cast<std::size_t>(e.p_col)] * e.p_unit;
    if (e.c_col >= 0) {
      if (p > 1e-12) repaired.en_channel_alloc[key].push_back({e.channel, p});
    } else {
      const double w = x[static_cast<std::size_t>(e.w_col)] * e.w_unit;
      if (p > 1e-12 || w > 1e-3) {
        if (t.node(key.from).kind == core::NodeKind::Edge)
          repaired.en_link_alloc[key] = core::LinkAlloc{w, p};
        else
          repaired.an_gn_alloc[key] = core::LinkAlloc{w, p};
      }
    }
  }
  // Drop ANs the accepted allocation does not use.
  std::vector<NodeId> used_ans;
  for (NodeId j : repaired.selected_ans) {
    double inbound = 0.0;
    for (const auto& [key, flow] : repaired.flows)
      if (key.to == j) inbound += flow;
    if (inbound > 1.0) used_ans.push_back(j);  // > 1 bps
  }
  repaired.selected_ans = used_ans;
  repaired.objective = 0.0;
  for (NodeId j : repaired.selected_ans) repaired.objective += t.node(j).deploy_cost;

  result.converged = true;
  result.plan = std::move(repaired);
  result.unserved_ens = std::move(unserved);
  std::sort(result.unserved_ens.begin(), result.unserved_ens.end());
  return result;
}

ResidualTopology iterate_residual(const Topology& t,
                                  std::span<const NodeId> infeasible_ens,
                                  std::span<const NodeId> unselected_ans,
                                  const DeploymentPlan& accepted, Mode mode) {
  ResidualTopology out;
  std::vector<NodeId> keep;
  for (NodeId i : infeasible_ens) keep.push_back(i);
  for (NodeId j : unselected_ans) keep.push_back(j);
  for (NodeId k : t.gateways()) keep.push_back(k);
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

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

  // Carry over budgets already recorded on kept nodes, translating receiver
  // references where possible.
  for (const auto& [old_id, budget] : t.residual) {
    auto it = to_local.find(old_id);
    if (it == to_local.end()) continue;
    core::ResidualBudget copy = budget;
    for (auto& [m, caps] : copy.tx_power_caps_w) {
      (void)m;
      for (auto& [receiver, cap] : caps) {
        (void)cap;
        auto r = to_local.find(receiver);
        receiver = r == to_local.end() ? -1 : r->second;
      }
    }
    out.topo.residual[it->second] = std::move(copy);
  }

  // Subtract what the accepted partial plan consumes.
  if (mode == Mode::Microwave) {
    for (const auto& [key, alloc] : accepted.en_link_alloc) {
      auto it = to_local.find(key.to);
      if (it == to_local.end()) continue;
      if (t.node(key.to).kind != core::NodeKind::Gateway) continue;
      out.topo.residual[it->second].used_inbound_bw_hz += alloc.bandwidth_hz;
    }
  } else {
    for (const auto& [key, channels] : accepted.en_channel_alloc) {
      for (const core::ChannelAlloc& c : channels) {
        if (c.power_w <= 0.0) continue;
        // Receiver-side bookkeeping for kept gateways.
        if (auto it = to_local.find(key.to); it != to_local.end()) {
          core::ResidualBudget& b = out.topo.residual[it->second];
          if (std::find(b.used_channels.begin(), b.used_channels.end(), c.channel) ==
              b.used_channels.end())
            b.used_channels.push_back(c.channel);
          b.used_sdma_slots[c.channel] += 1;
        }
        // Transmitter caps for every kept EN that could disturb this
        // accepted reception.
        for (NodeId en : infeasible_ens) {
          const auto g = t.gains.get_channel(BandId::Sub6, en, key.to, c.channel);
          if (!g.has_value() || *g < t.gain_floor) continue;
          auto lit = to_local.find(en);
          if (lit == to_local.end()) continue;
          auto rit = to_local.find(key.to);
          const NodeId receiver_local = rit == to_local.end() ? -1 : rit->second;
          out.topo.residual[lit->second].tx_power_caps_w[c.channel].push_back(
              {receiver_local, t.interference_threshold_w / *g});
        }
        // Interference the accepted transmitter loads onto kept receivers.
        for (NodeId kept : keep) {
          if (kept == key.to) continue;
          const core::Node& n = t.node(kept);
          if (n.kind == core::NodeKind::Edge) continue;
          const auto g = t.gains.get_channel(BandId::Sub6, key.from, kept, c.channel);
          if (!g.has_value() || *g < t.gain_floor) continue;
          core::ResidualBudget& b = out.topo.residual[to_local[kept]];
          double& cur = b.inbound_interference_w[c.channel];
          cur = std::max(cur, c.power_w * *g);
        }
      }
    }
  }
  return out;
}

milp::BnbResult solve_with_fallback(const form::Formulation& f, const Topology& t,
                                    const RepairConfig& cfg,
                                    std::vector<NodeId>* underserved) {
  milp::BnbOptions opts;
  opts.gap_target = cfg.gap_target;
  opts.time_limit_s = cfg.time_limit_s;
  opts.deterministic = cfg.deterministic;
  if (underserved != nullptr) underserved->clear();

  milp::BnbResult primary = milp::branch_and_bound(f.model(), opts);
  if (primary.status != milp::BnbStatus::Infeasible) return primary;

  // As printed the demand constraints are equalities; when they cannot all
  // hold, maximize served demand first, then minimize cost among the
  // max-service solutions.
  const std::vector<int>& flow_cols =
      f.mode == Mode::Microwave ? f.microwave->en_f : f.sub6->en_f;

  milp::MilpModel stage1;
  for (int j = 0; j < f.model().num_vars(); ++j) {
    const milp::VarRef& v = f.model().var(j);
    stage1.add_var(v.tag, v.kind, v.lo, v.hi, v.branch_priority);
  }
  for (const milp::Row& row : f.model().rows()) {
    milp::Row copy = row;
    if (copy.name.rfind("en_balance_", 0) == 0) copy.sense = milp::RowSense::LessEqual;
    stage1.add_row(copy);
  }
  for (int c : flow_cols) stage1.set_objective(c, -1.0);
  milp::BnbResult max_service = milp::branch_and_bound(stage1, opts);
  if (!max_service.incumbent.has_value()) return primary;
  const double served = -max_service.objective;

  milp::MilpModel stage2 = stage1;
  for (int j = 0; j < stage2.num_vars(); ++j) stage2.set_objective(j, 0.0);
  for (int j = 0; j < f.model().num_vars(); ++j)
    stage2.set_objective(j, f.model().objective()[static_cast<std::size_t>(j)]);
  {
    milp::Row row;
    row.sense = milp::RowSense::GreaterEqual;
    row.rhs = served - 1e-6 * std::max(1.0, served);
    row.name = "service_floor";
    for (int c : flow_cols) row.terms.push_back({c, 1.0});
    stage2.add_row(row);
  }
  milp::BnbResult final_result = milp::branch_and_bound(stage2, opts);
  if (!final_result.incumbent.has_value()) return primary;

  if (underserved != nullptr) {
    const std::vector<core::DirectedLink>& links =
        f.mode == Mode::Microwave ? f.microwave->en_links : f.sub6->en_links;
    std::map<NodeId, double> served_by_en;
    for (std::size_t l = 0; l < links.size(); ++l)
      served_by_en[links[l].from] +=
          (*final_result.incumbent)[static_cast<std::size_t>(flow_cols[l])];
    for (NodeId i : t.edge_nodes()) {
      const double demand_mbps = t.node(i).demand_bps / form::kFlowUnitBps;
      if (served_by_en[i] < demand_mbps * (1.0 - kServeTol)) underserved->push_back(i);
    }
  }
  return final_result;
}

namespace {

DeploymentPlan translate_plan(const DeploymentPlan& plan,
                              const std::vector<NodeId>& to_original) {
  auto tr = [&](NodeId local) { return to_original[static_cast<std::size_t>(local)]; };
  DeploymentPlan out;
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

void merge_plan(DeploymentPlan& into, const DeploymentPlan& part) {
  for (NodeId j : part.selected_ans)
    if (!std::binary_search(into.selected_ans.begin(), into.selected_ans.end(), j)) {
      into.selected_ans.push_back(j);
      std::sort(into.selected_ans.begin(), into.selected_ans.end());
    }
  for (const auto& [key, v] : part.flows) into.flows[key] += v;
  for (const auto& [key, v] : part.en_link_alloc) {
    core::LinkAlloc& a = into.en_link_alloc[key];
    a.bandwidth_hz += v.bandwidth_hz;
    a.power_w += v.power_w;
  }
  for (const auto& [key, v] : part.en_channel_alloc) {
    auto& channels = into.en_channel_alloc[key];
    channels.insert(channels.end(), v.begin(), v.end());
  }
  for (const auto& [key, v] : part.an_gn_alloc) {
    core::LinkAlloc& a = into.an_gn_alloc[key];
    a.bandwidth_hz += v.bandwidth_hz;
    a.power_w += v.power_w;
  }
}

// ENs whose routing touches a capacity-violated link or whose demand is not
// fully carried.
std::vector<NodeId> dirty_ens(const DeploymentPlan& plan, const Topology& t, Mode mode) {
  const std::vector<LinkKey> violated = check_true_capacity(plan, t, mode);
  std::vector<NodeId> out;
  for (NodeId i : t.edge_nodes()) {
    bool dirty = !en_served(plan, t, i);
    for (const LinkKey& key : violated) {
      if (key.from == i) dirty = true;
      if (t.node(key.from).kind == core::NodeKind::AggregatorCandidate) {
        // A broken 60 GHz leg taints every EN routed through that AN.
        auto it = plan.flows.find({i, key.from});
        if (it != plan.flows.end() && it->second > 0.0) dirty = true;
      }
    }
    if (dirty) out.push_back(i);
  }
  return out;
}

}  // namespace

RepairReport repair(const DeploymentPlan& plan, form::Formulation& f,
                    const milp::BnbResult& sol, const Topology& t,
                    const RepairConfig& cfg) {
  RepairReport report;

  // Round-local state; ids map back to the caller's topology.
  Topology topo = t;
  std::vector<NodeId> to_orig;
  for (const core::Node& n : t.nodes) to_orig.push_back(n.id);
  form::Formulation* cur_f = &f;
  std::optional<form::Formulation> owned_f;
  milp::BnbResult cur_sol = sol;
  DeploymentPlan cur_plan = plan;

  DeploymentPlan final_plan;
  final_plan.lower_bound = sol.lower_bound;

  auto orig = [&](NodeId local) { return to_orig[static_cast<std::size_t>(local)]; };

  for (int round = 0;; ++round) {
    // Structurally unservable ENs of this round can never improve: the
    // candidate set only shrinks across rounds.
    for (NodeId i : cur_f->structurally_infeasible())
      report.en_status[orig(i)] = EnRepairStatus::Infeasible;

    const std::vector<NodeId> dirty0 = dirty_ens(cur_plan, topo, f.mode);
    std::vector<NodeId> dirty_after_refine = dirty0;
    bool refine_ran = false;

    DeploymentPlan accepted = cur_plan;
    std::vector<NodeId> unserved;

    if (!dirty0.empty()) {
      if (!cfg.skip_refine) {
        refine_ran = true;
        const milp::BnbResult refined =
            refine_and_resolve(*cur_f, topo, cfg.refine_factor, cur_sol, cfg);
        if (refined.incumbent.has_value()) {
          cur_sol = refined;
          cur_plan = cur_f->extract(refined, topo);
          dirty_after_refine = dirty_ens(cur_plan, topo, f.mode);
        }
      }
      if (!dirty_after_refine.empty()) {
        const std::vector<double>* raw =
            cur_sol.incumbent.has_value() ? &*cur_sol.incumbent : nullptr;
        const SparePassResult spare = spare_bandwidth_pass(cur_plan, *cur_f, topo, raw);
        accepted = spare.plan;
        unserved = spare.unserved_ens;
      } else {
        accepted = cur_plan;
      }
    } else {
      // No capacity violations; ENs can still be unserved when the solve
      // fell back to max-service.
      for (NodeId i : topo.edge_nodes())
        if (!en_served(cur_plan, topo, i)) unserved.push_back(i);
      if (!unserved.empty()) {
        const std::vector<double>* raw =
            cur_sol.incumbent.has_value() ? &*cur_sol.incumbent : nullptr;
        const SparePassResult spare = spare_bandwidth_pass(cur_plan, *cur_f, topo, raw);
        accepted = spare.plan;
        unserved = spare.unserved_ens;
      }
    }

    // Statuses for ENs this round serves.
    for (NodeId i : topo.edge_nodes()) {
      const NodeId oid = orig(i);
      if (report.en_status.count(oid) > 0) continue;  // structural
      if (std::binary_search(unserved.begin(), unserved.end(), i)) continue;
      if (!en_served(accepted, topo, i)) continue;
      if (round > 0) {
        report.en_status[oid] = EnRepairStatus::DeferredToIteration;
      } else if (std::find(dirty0.begin(), dirty0.end(), i) == dirty0.end()) {
        report.en_status[oid] = EnRepairStatus::FeasibleAsIs;
      } else if (refine_ran && std::find(dirty_after_refine.begin(),
                                         dirty_after_refine.end(),
                                         i) == dirty_after_refine.end()) {
        report.en_status[oid] = EnRepairStatus::RepairedByRefinement;
      } else {
        report.en_status[oid] = EnRepairStatus::RepairedBySpareBandwidth;
      }
    }

    merge_plan(final_plan, translate_plan(accepted, to_orig));

    // Remaining work: unserved ENs that are not already written off.
    std::vector<NodeId> deferred;
    for (NodeId i : unserved)
      if (report.en_status.count(orig(i)) == 0) deferred.push_back(i);

    if (deferred.empty()) break;

    std::vector<NodeId> unselected;
    for (NodeId j : topo.aggregator_candidates())
      if (!std::binary_search(accepted.selected_ans.begin(), accepted.selected_ans.end(),
                              j))
        unselected.push_back(j);

    const bool can_iterate = round + 1 < cfg.max_iterations;
    if (!can_iterate) {
      for (NodeId i : deferred) report.en_status[orig(i)] = EnRepairStatus::Infeasible;
      break;
    }

    ResidualTopology next = iterate_residual(topo, deferred, unselected, accepted, f.mode);
    ++report.iterations_used;

    // Compose the id maps and re-run the pipeline on the residual problem.
    std::vector<NodeId> next_to_orig;
    for (NodeId local : next.to_original) next_to_orig.push_back(orig(local));
    topo = std::move(next.topo);
    to_orig = std::move(next_to_orig);

    owned_f = form::Formulation::build(topo, f.mode, f.k_p, f.k_w);
    cur_f = &*owned_f;
    std::vector<NodeId> fallback_underserved;
    cur_sol = solve_with_fallback(*cur_f, topo, cfg, &fallback_underserved);
    if (!cur_sol.incumbent.has_value()) {
      for (NodeId i : topo.edge_nodes())
        if (report.en_status.count(orig(i)) == 0)
          report.en_status[orig(i)] = EnRepairStatus::Infeasible;
      break;
    }
    cur_plan = cur_f->extract(cur_sol, topo);
  }

  // Final assembly: costs from the union of deployments, bound from the
  // first relaxation.
  final_plan.objective = 0.0;
  for (NodeId j : final_plan.selected_ans) final_plan.objective += t.node(j).deploy_cost;
  final_plan.lower_bound = std::min(sol.lower_bound, final_plan.objective);
  const double raw_gap = std::max(0.0, final_plan.objective - final_plan.lower_bound);
  final_plan.gap = raw_gap <= 1e-9 * std::max(1.0, final_plan.objective)
                       ? 0.0
                       : raw_gap / std::max(final_plan.objective, 1e-12);
  for (const auto& [en, status] : report.en_status)
    if (status == EnRepairStatus::Infeasible) final_plan.infeasible_ens.push_back(en);
  std::sort(final_plan.infeasible_ens.begin(), final_plan.infeasible_ens.end());
  report.final_plan = std::move(final_plan);
  return report;
}

}  // namespace backhaul::repair
