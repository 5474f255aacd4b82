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

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "backhaul/io/scenario.hpp"
#include "backhaul/io/topology_io.hpp"

namespace {

int run_plan(const std::string& topology_path, backhaul::io::ScenarioConfig cfg,
             const std::string& grid, const std::string& out_dir) {
  using namespace backhaul;

  if (!grid.empty()) {
    const auto x = grid.find('x');
    if (x == std::string::npos) {
      std::cerr << "error: --grid expects KPxKW, e.g. 8x8\n";
      return 2;
    }
    cfg.grid_kp = std::stoi(grid.substr(0, x));
    cfg.grid_kw = std::stoi(grid.substr(x + 1));
  }

  core::Topology t;
  try {
    t = io::parse_topology(topology_path, cfg.seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  io::ScenarioResult result;
  try {
    result = io::run_scenario(t, cfg);
  } catch (const io::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io::VerificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io::NoIncumbentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    io::write_outputs(result, t, cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::printf("status:          %s\n", result.stats.status.c_str());
  std::printf("deployment cost: %.6g\n", result.plan.objective);
  std::printf("selected ANs:    ");
  if (result.plan.selected_ans.empty()) std::printf("(none)");
  for (auto j : result.plan.selected_ans) std::printf("%d ", j);
  std::printf("\n");
  std::printf("infeasible ENs:  %zu\n", result.plan.infeasible_ens.size());
  std::printf("gap:             %.6g\n", result.plan.gap);
  std::printf("nodes explored:  %ld\n", result.stats.nodes_explored);
  std::printf("wall time:       %.3f s\n", result.wall_time_s);
  std::printf("outputs:         %s/plan.json, %s/plan.dot\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless backhaul aggregator placement planner"};
  app.require_subcommand(1);

  std::string topology_path;
  std::string mode = "microwave";
  std::string grid;
  std::string out_dir = "out";
  std::string greedy_band = "sub6";
  backhaul::io::ScenarioConfig cfg;
  bool no_deterministic = false;

  CLI::App* plan = app.add_subcommand("plan", "solve a placement scenario");
  plan->add_option("topology", topology_path, "topology JSON file")->required();
  plan->add_option("--mode", mode, "microwave | sub6 | greedy")
      ->check(CLI::IsMember({"microwave", "sub6", "greedy"}));
  plan->add_option("--gap", cfg.gap_target, "branch-and-bound optimality gap target");
  plan->add_option("--time-limit", cfg.time_limit_s, "solver time limit in seconds");
  plan->add_option("--grid", grid, "tangent grid size KPxKW (default 8x8)");
  plan->add_option("--seed", cfg.seed, "seed for synthetic gain generation");
  plan->add_option("--out", out_dir, "output directory");
  plan->add_option("--repair-iterations", cfg.repair_max_iterations,
                   "max residual repair rounds");
  plan->add_option("--greedy-band", greedy_band, "access band for greedy mode")
      ->check(CLI::IsMember({"sub6", "microwave"}));
  plan->add_flag("--dump-milp", cfg.dump_milp, "write the model as milp.lp");
  plan->add_flag("--skip-refine", cfg.skip_refine, "skip the grid-refinement repair step");
  plan->add_flag("--no-deterministic", no_deterministic,
                 "drop the deterministic-order guarantee");

  CLI11_PARSE(app, argc, argv);

  cfg.deterministic = !no_deterministic;
  cfg.mode = mode == "microwave"  ? backhaul::io::PlanMode::Microwave
             : mode == "sub6"     ? backhaul::io::PlanMode::Sub6
                                  : backhaul::io::PlanMode::Greedy;
  cfg.greedy_band = greedy_band == "microwave" ? backhaul::core::BandId::Microwave
                                               : backhaul::core::BandId::Sub6;
  return run_plan(topology_path, cfg, grid, out_dir);
}
