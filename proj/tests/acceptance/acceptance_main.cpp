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

// End-to-end acceptance runs. Each criterion prints exactly one PASS/FAIL
// line; the binary exits nonzero when any of them fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "backhaul/capacity/capacity.hpp"
#include "backhaul/greedy/greedy.hpp"
#include "backhaul/io/dot_export.hpp"
#include "backhaul/io/scenario.hpp"
#include "backhaul/linkbudget/link_budget.hpp"
#include "backhaul/repair/repair.hpp"
#include "support/instance_gen.hpp"
#include "support/oracles.hpp"

namespace {

using namespace backhaul;
namespace ts = backhaul::testsupport;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// --------------------------------------------------------------------------
// 1. Relaxation soundness: random links, sampled envelope vs capacity.
// --------------------------------------------------------------------------
bool criterion_relaxation_soundness(std::string& detail) {
  const auto start = Clock::now();
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long checked = 0;
  double worst_under = 0.0;
  for (int link = 0; link < 100; ++link) {
    const capacity::CapacityFn fn{std::pow(10.0, -13.0 + 5.0 * unit(rng)),
                                  std::pow(10.0, -21.0 + unit(rng))};
    const double p_max = 0.01 + unit(rng);
    const double w_max = (0.2 + unit(rng)) * 5e8;
    const auto grid = capacity::build_tangent_grid(fn, p_max, w_max, 8, 8);
    // Exactness at every expansion point.
    for (const auto& plane : grid.planes) {
      const double cap = capacity::capacity(fn, plane.p0, plane.w0);
      const double eval = grid.eval_min(plane.p0, plane.w0);
      if (std::fabs(eval - cap) > 1e-9 * std::max(1.0, cap)) {
        detail = "expansion-point mismatch";
        return false;
      }
    }
    for (int s = 0; s < 10000; ++s) {
      const double p = unit(rng) * p_max;
      const double w = unit(rng) * w_max;
      const double cap = capacity::capacity(fn, p, w);
      const double env = grid.eval_min(p, w);
      worst_under = std::max(worst_under, cap - env);
      if (env < cap - 1e-9 * std::max(1.0, cap)) {
        std::ostringstream os;
        os << "envelope below capacity by " << cap - env << " bit/s";
        detail = os.str();
        return false;
      }
      ++checked;
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << checked << " samples over 100 links in " << elapsed << " s";
  detail = os.str();
  return elapsed < 10.0;
}

// --------------------------------------------------------------------------
// 2. Oracle optimality: branch and bound vs exhaustive enumeration.
// --------------------------------------------------------------------------
bool criterion_oracle_optimality(std::string& detail) {
  const auto start = Clock::now();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> en_count(3, 6);
  std::uniform_int_distribution<int> an_count(2, 4);
  int matched = 0, infeasible_agreed = 0;

  for (int inst = 0; inst < 50; ++inst) {
    ts::RandomSpec spec;
    spec.n_en = en_count(rng);
    spec.n_an = an_count(rng);
    spec.n_gn = 1;
    spec.cost_min = 1.0;
    spec.cost_max = 4.0;
    const core::Topology t = ts::random_topology(spec, 1000 + inst);
    const form::MicrowaveFormulation f = form::build_microwave(t, 8, 8);
    const double oracle = ts::enumerate_microwave_placements(f, t);
    const milp::BnbResult res = milp::branch_and_bound(f.model);
    if (std::isinf(oracle)) {
      if (res.incumbent.has_value()) {
        detail = "microwave solver found a plan the oracle rules out";
        return false;
      }
      ++infeasible_agreed;
    } else {
      if (!res.incumbent.has_value() ||
          std::fabs(res.objective - oracle) > 1e-6 * std::max(1.0, oracle)) {
        std::ostringstream os;
        os << "microwave instance " << inst << ": solver "
           << (res.incumbent.has_value() ? std::to_string(res.objective) : "none")
           << " vs oracle " << oracle;
        detail = os.str();
        return false;
      }
      ++matched;
    }
  }

  std::uniform_int_distribution<int> s_en(2, 3);
  std::uniform_int_distribution<int> s_an(1, 2);
  for (int inst = 0; inst < 20; ++inst) {
    ts::RandomSpec spec;
    spec.n_en = s_en(rng);
    spec.n_an = s_an(rng);
    spec.n_gn = 1;
    spec.num_channels = 2;
    spec.sdma_order = 2;
    spec.radios_en = 2;
    spec.area_m = 380.0;
    spec.demand_min_mbps = 15.0;
    spec.demand_max_mbps = 45.0;
    core::Topology t = ts::random_topology(spec, 5000 + inst);
    const form::Sub6Formulation f = form::build_sub6(t, 8, 6, 6);
    const double oracle = ts::enumerate_sub6_schedules(f, t);
    const milp::BnbResult res = milp::branch_and_bound(f.model);
    if (std::isinf(oracle)) {
      if (res.incumbent.has_value()) {
        detail = "sub6 solver found a plan the oracle rules out";
        return false;
      }
      ++infeasible_agreed;
    } else {
      if (!res.incumbent.has_value() ||
          std::fabs(res.objective - oracle) > 1e-6 * std::max(1.0, oracle)) {
        std::ostringstream os;
        os << "sub6 instance " << inst << ": solver "
           << (res.incumbent.has_value() ? std::to_string(res.objective) : "none")
           << " vs oracle " << oracle;
        detail = os.str();
        return false;
      }
      ++matched;
    }
  }

  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << matched << " optima matched, " << infeasible_agreed
     << " infeasibilities agreed, " << elapsed << " s";
  detail = os.str();
  return elapsed < 300.0;
}

// --------------------------------------------------------------------------
// 3. Constraint soundness: every emitted plan passes the post-hoc verifier.
// --------------------------------------------------------------------------
bool criterion_constraint_soundness(std::string& detail) {
  const auto start = Clock::now();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> en_count(3, 7);
  std::uniform_int_distribution<int> an_count(2, 4);
  std::uniform_int_distribution<int> s_en(2, 4);
  std::uniform_int_distribution<int> s_an(1, 2);
  int runs = 0;

  for (int inst = 0; inst < 100; ++inst) {
    ts::RandomSpec spec;
    spec.n_en = en_count(rng);
    spec.n_an = an_count(rng);
    spec.cost_min = 1.0;
    spec.cost_max = 3.0;
    const core::Topology t = ts::random_topology(spec, 20000 + inst);
    io::ScenarioConfig cfg;
    cfg.mode = io::PlanMode::Microwave;
    cfg.grid_kp = 6;
    cfg.grid_kw = 6;
    cfg.time_limit_s = 120.0;
    try {
      (void)io::run_scenario(t, cfg);  // throws on any verifier violation
      ++runs;
    } catch (const std::exception& e) {
      detail = std::string("microwave instance ") + std::to_string(inst) + ": " + e.what();
      return false;
    }
  }

  for (int inst = 0; inst < 100; ++inst) {
    ts::RandomSpec spec;
    spec.n_en = s_en(rng);
    spec.n_an = s_an(rng);
    spec.num_channels = 2;
    spec.sdma_order = 2;
    spec.radios_en = 2;
    spec.area_m = 400.0;
    spec.demand_min_mbps = 15.0;
    spec.demand_max_mbps = 50.0;
    const core::Topology t = ts::random_topology(spec, 30000 + inst);
    io::ScenarioConfig cfg;
    cfg.mode = io::PlanMode::Sub6;
    cfg.grid_kp = 6;
    cfg.time_limit_s = 120.0;
    try {
      (void)io::run_scenario(t, cfg);
      ++runs;
    } catch (const std::exception& e) {
      detail = std::string("sub6 instance ") + std::to_string(inst) + ": " + e.what();
      return false;
    }
  }

  for (int inst = 0; inst < 100; ++inst) {
    ts::RandomSpec spec;
    spec.n_en = 4 + inst % 6;
    spec.n_an = 3;
    spec.cost_min = 0.5;
    spec.cost_max = 3.0;
    const core::Topology t = ts::random_topology(spec, 40000 + inst);
    io::ScenarioConfig cfg;
    cfg.mode = io::PlanMode::Greedy;
    cfg.greedy_band = inst % 2 == 0 ? core::BandId::Sub6 : core::BandId::Microwave;
    try {
      (void)io::run_scenario(t, cfg);
      ++runs;
    } catch (const std::exception& e) {
      detail = std::string("greedy instance ") + std::to_string(inst) + ": " + e.what();
      return false;
    }
  }

  std::ostringstream os;
  os << runs << " plans verified with zero violations, " << seconds_since(start) << " s";
  detail = os.str();
  return runs == 300;
}

// --------------------------------------------------------------------------
// 4. Repair convergence on the constructed coarse-grid family.
// --------------------------------------------------------------------------
bool criterion_repair_convergence(std::string& detail) {
  const auto start = Clock::now();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> gain_db(-101.0, -91.0);
  int repaired = 0;

  for (int inst = 0; inst < 20; ++inst) {
    // Two edge nodes share a single-radio gateway; demand equals the true
    // capacity of a half-bandwidth split, which the 1x1 grid overstates.
    core::Topology t = ts::base_topology();
    const double g_db = gain_db(rng);
    const capacity::CapacityFn fn{core::db_to_linear(g_db),
                                  t.microwave.noise_spectral_density_w_per_hz};
    const double d = capacity::capacity(fn, t.microwave.max_power_per_radio_w,
                                        t.microwave.max_bandwidth_per_radio_hz / 2.0);
    t.nodes.push_back(ts::edge_node(0, d / 1e6));
    t.nodes.push_back(ts::edge_node(1, d / 1e6));
    t.nodes.push_back(ts::gateway_node(2, 1));
    ts::set_gain_db(t, core::BandId::Microwave, 0, 2, g_db);
    ts::set_gain_db(t, core::BandId::Microwave, 1, 2, g_db);

    form::Formulation coarse = form::Formulation::build(t, form::Mode::Microwave, 1, 1);
    const milp::BnbResult sol = milp::branch_and_bound(coarse.model());
    if (!sol.incumbent.has_value()) {
      detail = "coarse model unexpectedly infeasible";
      return false;
    }
    const core::DeploymentPlan plan = coarse.extract(sol, t);
    if (repair::check_true_capacity(plan, t, form::Mode::Microwave).empty()) {
      detail = "instance " + std::to_string(inst) + ": 1x1 grid produced no violation";
      return false;
    }

    // Which edge nodes does a k=32 direct solve serve?
    form::Formulation fine = form::Formulation::build(t, form::Mode::Microwave, 32, 32);
    repair::RepairConfig rcfg;
    std::vector<core::NodeId> fine_underserved;
    const milp::BnbResult fine_sol =
        repair::solve_with_fallback(fine, t, rcfg, &fine_underserved);
    if (!fine_sol.incumbent.has_value()) {
      detail = "k=32 solve failed";
      return false;
    }

    const repair::RepairReport report = repair::repair(plan, coarse, sol, t, rcfg);
    if (!repair::check_true_capacity(report.final_plan, t, form::Mode::Microwave)
             .empty()) {
      detail = "instance " + std::to_string(inst) + ": repaired plan still violates";
      return false;
    }
    for (core::NodeId en : t.edge_nodes()) {
      const bool fine_serves =
          std::find(fine_underserved.begin(), fine_underserved.end(), en) ==
          fine_underserved.end();
      const bool infeasible =
          report.en_status.at(en) == repair::EnRepairStatus::Infeasible;
      if (fine_serves && infeasible) {
        detail = "instance " + std::to_string(inst) + ": edge node " +
                 std::to_string(en) + " declared infeasible but k=32 serves it";
        return false;
      }
    }
    ++repaired;
  }
  std::ostringstream os;
  os << repaired << "/20 coarse-grid instances repaired, " << seconds_since(start)
     << " s";
  detail = os.str();
  return repaired == 20;
}

// --------------------------------------------------------------------------
// 5. Greedy guarantee: harmonic bound and polynomial operation growth.
// --------------------------------------------------------------------------
bool criterion_greedy_guarantee(std::string& detail) {
  const auto start = Clock::now();
  int bounded = 0, evaluated = 0;
  for (int inst = 0; inst < 50; ++inst) {
    ts::RandomSpec spec;
    spec.n_en = 5 + inst % 4;
    spec.n_an = 4 + inst % 3;
    spec.n_gn = 1;
    spec.cost_min = 0.5;
    spec.cost_max = 3.0;
    const core::Topology t = ts::random_topology(spec, 60000 + inst);
    const core::DeploymentPlan plan = greedy::greedy_place(t, core::BandId::Microwave);
    if (!plan.infeasible_ens.empty()) continue;

    // Exhaustive minimum-cost cover (gateways are free).
    const auto sets = greedy::coverage_sets(t, core::BandId::Microwave);
    std::vector<const greedy::CoverageSet*> an_sets;
    std::set<core::NodeId> gn_covered;
    for (const auto& cs : sets) {
      if (t.node(cs.center).kind == core::NodeKind::Gateway)
        gn_covered.insert(cs.members.begin(), cs.members.end());
      else
        an_sets.push_back(&cs);
    }
    std::set<core::NodeId> need;
    for (core::NodeId i : t.edge_nodes())
      if (gn_covered.count(i) == 0) need.insert(i);
    double opt = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(an_sets.size());
    for (int mask = 0; mask < (1 << n); ++mask) {
      double cost = 0.0;
      std::set<core::NodeId> covered;
      for (int b = 0; b < n; ++b)
        if ((mask >> b) & 1) {
          cost += an_sets[static_cast<std::size_t>(b)]->weight;
          covered.insert(an_sets[static_cast<std::size_t>(b)]->members.begin(),
                         an_sets[static_cast<std::size_t>(b)]->members.end());
        }
      bool full = true;
      for (core::NodeId i : need) full = full && covered.count(i) > 0;
      if (full) opt = std::min(opt, cost);
    }
    if (std::isinf(opt)) continue;
    ++evaluated;
    double harmonic = 0.0;
    for (int k = 1; k <= static_cast<int>(t.edge_nodes().size()); ++k)
      harmonic += 1.0 / k;
    if (plan.objective > harmonic * opt + 1e-9) {
      std::ostringstream os;
      os << "instance " << inst << ": greedy " << plan.objective << " vs H*OPT "
         << harmonic * opt;
      detail = os.str();
      return false;
    }
    ++bounded;
  }

  // Operation growth up to 200 edge nodes and 50 candidates.
  std::vector<long long> ops;
  for (int n_en : {25, 50, 100, 200}) {
    ts::RandomSpec spec;
    spec.n_en = n_en;
    spec.n_an = 48;
    spec.n_gn = 2;
    spec.area_m = 800.0;
    const core::Topology t = ts::random_topology(spec, 70000 + n_en);
    greedy::GreedyStats stats;
    (void)greedy::greedy_place(t, core::BandId::Microwave, &stats);
    ops.push_back(stats.operations);
  }
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const long long centers = 50;
    const long long n_en = 25LL << k;
    if (ops[k] > 4 * centers * centers * n_en) {
      detail = "operation count exceeds the cubic bound";
      return false;
    }
  }
  // Doubling the edge nodes must scale far below exponentially.
  for (std::size_t k = 1; k < ops.size(); ++k) {
    if (ops[k] > ops[k - 1] * 8) {
      detail = "operation count grows super-polynomially";
      return false;
    }
  }

  std::ostringstream os;
  os << bounded << "/" << evaluated << " instances within the harmonic bound, ops "
     << ops[0] << "->" << ops[3] << " for 25->200 edge nodes, " << seconds_since(start)
     << " s";
  detail = os.str();
  return evaluated >= 25 && bounded == evaluated;
}

// --------------------------------------------------------------------------
// 6. Interference-margin methodology on a synthetic narrow-beam scenario.
// --------------------------------------------------------------------------

// Independent recomputation: plain dB bookkeeping over all ordered pairs,
// sharing only the plan/topology data with the implementation under test.
double recompute_margin_db(const core::DeploymentPlan& plan, const core::Topology& t,
                           double boresight_db, double beamwidth_deg,
                           double sidelobe_db) {
  struct L {
    core::NodeId tx, rx;
    double p_w, w_hz;
  };
  std::vector<L> links;
  for (const auto& [key, alloc] : plan.en_link_alloc)
    links.push_back({key.from, key.to, alloc.power_w, alloc.bandwidth_hz});
  auto pos = [&](core::NodeId id) { return *t.node(id).position; };
  auto angle = [&](const core::Vec3& at, const core::Vec3& a, const core::Vec3& b) {
    const double ax = a.x - at.x, ay = a.y - at.y, az = a.z - at.z;
    const double bx = b.x - at.x, by = b.y - at.y, bz = b.z - at.z;
    const double c = (ax * bx + ay * by + az * bz) /
                     (std::sqrt(ax * ax + ay * ay + az * az) *
                      std::sqrt(bx * bx + by * by + bz * bz));
    return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / M_PI;
  };
  double worst = std::numeric_limits<double>::infinity();
  for (const L& victim : links) {
    for (const L& other : links) {
      if (victim.tx == other.tx || victim.tx == other.rx || victim.rx == other.tx ||
          victim.rx == other.rx)
        continue;
      const double ant_db =
          core::linear_to_db(t.microwave.antenna_gain_linear);
      const double table_db =
          core::linear_to_db(*t.gains.get(core::BandId::Microwave, other.tx, victim.rx));
      const double path_db = table_db - 2.0 * ant_db;
      const double tx_beam =
          angle(pos(other.tx), pos(other.rx), pos(victim.rx)) <= beamwidth_deg / 2.0
              ? boresight_db
              : sidelobe_db;
      const double rx_beam =
          angle(pos(victim.rx), pos(victim.tx), pos(other.tx)) <= beamwidth_deg / 2.0
              ? boresight_db
              : sidelobe_db;
      const double interference_dbw =
          10.0 * std::log10(other.p_w) + tx_beam + rx_beam + path_db;
      const double noise_dbw = 10.0 * std::log10(
          t.microwave.noise_spectral_density_w_per_hz * victim.w_hz);
      worst = std::min(worst, noise_dbw - interference_dbw);
    }
  }
  return worst;
}

bool criterion_interference_margin(std::string& detail) {
  core::Topology t = ts::base_topology();
  t.nodes.push_back(ts::edge_node(0, 100.0));
  t.nodes.push_back(ts::edge_node(1, 100.0));
  t.nodes.push_back(ts::gateway_node(2));
  t.nodes.push_back(ts::gateway_node(3));
  t.nodes[0].position = core::Vec3{0.0, 0.0, 5.0};
  t.nodes[2].position = core::Vec3{400.0, 30.0, 30.0};
  t.nodes[1].position = core::Vec3{20.0, 600.0, 5.0};
  t.nodes[3].position = core::Vec3{380.0, 640.0, 30.0};
  ts::set_gain_db(t, core::BandId::Microwave, 0, 2, -96.0);
  ts::set_gain_db(t, core::BandId::Microwave, 1, 3, -97.0);
  ts::set_gain_db(t, core::BandId::Microwave, 0, 3, -113.0);
  ts::set_gain_db(t, core::BandId::Microwave, 1, 2, -116.0);

  core::DeploymentPlan plan;
  plan.flows[{0, 2}] = 1e8;
  plan.flows[{1, 3}] = 1e8;
  plan.en_link_alloc[{0, 2}] = {56e6, 0.06};
  plan.en_link_alloc[{1, 3}] = {80e6, 0.04};

  linkbudget::AntennaPattern narrow;
  narrow.boresight_gain_linear = core::db_to_linear(38.0);
  narrow.beamwidth_deg = 8.0;
  narrow.sidelobe_gain_linear = 0.0;
  const auto clean = linkbudget::interference_margin(plan, t, narrow);
  const auto& clean_mw = clean.at(core::BandId::Microwave);
  if (!clean_mw.applicable || !std::isinf(clean_mw.margin_db)) {
    detail = "zero-sidelobe margin was not infinite";
    return false;
  }

  linkbudget::AntennaPattern lobed = narrow;
  lobed.sidelobe_gain_linear = core::db_to_linear(-3.0);
  const auto margins = linkbudget::interference_margin(plan, t, lobed);
  const double expected = recompute_margin_db(plan, t, 38.0, 8.0, -3.0);
  const double got = margins.at(core::BandId::Microwave).margin_db;
  std::ostringstream os;
  os << "margin " << got << " dB vs independent " << expected << " dB";
  detail = os.str();
  return std::fabs(got - expected) <= 0.1;
}

// --------------------------------------------------------------------------
// 7. Determinism: byte-identical plan and DOT outputs across runs.
// --------------------------------------------------------------------------
bool criterion_determinism(std::string& detail) {
  const auto start = Clock::now();
  for (io::PlanMode mode :
       {io::PlanMode::Microwave, io::PlanMode::Sub6, io::PlanMode::Greedy}) {
    ts::RandomSpec spec;
    spec.n_en = mode == io::PlanMode::Sub6 ? 3 : 5;
    spec.n_an = 2;
    spec.num_channels = mode == io::PlanMode::Sub6 ? 2 : 4;
    spec.area_m = 420.0;
    const core::Topology t = ts::random_topology(spec, 123);
    io::ScenarioConfig cfg;
    cfg.mode = mode;
    cfg.grid_kp = 4;
    cfg.grid_kw = 4;
    cfg.deterministic = true;

    const auto run = [&] {
      const io::ScenarioResult r = io::run_scenario(t, cfg);
      const auto* report = r.report.has_value() ? &*r.report : nullptr;
      return io::serialize_plan(r.plan, report, r.stats, cfg.mode) + "\n---\n" +
             io::export_graph(r.plan, t, cfg.mode);
    };
    const std::string a = run();
    const std::string b = run();
    if (a != b) {
      detail = "outputs differ between runs in mode " + std::to_string(static_cast<int>(mode));
      return false;
    }
  }
  std::ostringstream os;
  os << "three modes byte-identical across repeated runs, " << seconds_since(start)
     << " s";
  detail = os.str();
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {"relaxation soundness", criterion_relaxation_soundness},
      {"oracle optimality", criterion_oracle_optimality},
      {"constraint soundness", criterion_constraint_soundness},
      {"repair convergence", criterion_repair_convergence},
      {"greedy guarantee", criterion_greedy_guarantee},
      {"interference margin", criterion_interference_margin},
      {"determinism", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[k].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu (%s): %s\n", ok ? "PASS" : "FAIL", k + 1,
                criteria[k].name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
