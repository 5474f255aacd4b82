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

#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "backhaul/milp/branch_and_bound.hpp"

namespace {

using backhaul::milp::BnbOptions;
using backhaul::milp::BnbResult;
using backhaul::milp::BnbStatus;
using backhaul::milp::branch_and_bound;
using backhaul::milp::LpStatus;
using backhaul::milp::MilpModel;
using backhaul::milp::Row;
using backhaul::milp::RowSense;
using backhaul::milp::solve_lp;
using backhaul::milp::VarKind;
using backhaul::milp::warm_fix;

// Brute force over all binary assignments, solving the remaining LP at each
// leaf via warm_fix.
double enumerate_optimum(const MilpModel& m) {
  std::vector<int> binaries;
  for (int j = 0; j < m.num_vars(); ++j)
    if (m.var(j).kind == VarKind::Binary) binaries.push_back(j);
  double best = std::numeric_limits<double>::infinity();
  const int count = static_cast<int>(binaries.size());
  for (int mask = 0; mask < (1 << count); ++mask) {
    std::vector<std::pair<int, double>> fixed;
    for (int b = 0; b < count; ++b)
      fixed.emplace_back(binaries[static_cast<std::size_t>(b)],
                         (mask >> b) & 1 ? 1.0 : 0.0);
    const auto lp = solve_lp(warm_fix(m, fixed));
    if (lp.status == LpStatus::Optimal) best = std::min(best, lp.objective);
  }
  return best;
}

// Mixed binary/continuous knapsack-style model with random couplings.
MilpModel random_milp(std::mt19937_64& rng, int n_bin, int n_cont) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MilpModel m;
  for (int j = 0; j < n_bin; ++j) {
    m.add_var({"b", j}, VarKind::Binary, 0.0, 1.0, j % 3);
    m.set_objective(j, -1.0 - 3.0 * unit(rng));  // rewards selection
  }
  for (int j = 0; j < n_cont; ++j) {
    const int col = m.add_var({"z", j}, VarKind::Continuous, 0.0, 2.0);
    m.set_objective(col, 0.5 - unit(rng));
  }
  // Capacity rows keep the all-ones assignment infeasible.
  for (int r = 0; r < 3; ++r) {
    Row row;
    double total = 0.0;
    for (int j = 0; j < n_bin + n_cont; ++j) {
      if (unit(rng) < 0.7) {
        const double a = 0.2 + 2.0 * unit(rng);
        row.terms.push_back({j, a});
        total += a;
      }
    }
    if (row.terms.empty()) continue;
    row.sense = RowSense::LessEqual;
    row.rhs = total * (0.3 + 0.4 * unit(rng));
    m.add_row(row);
  }
  return m;
}

TEST_CASE("all-integral relaxation returns at the root") {
  // min -b with b in {0,1} free to sit at its bound: LP optimum is integral.
  MilpModel m;
  m.add_var({"b", 0}, VarKind::Binary, 0.0, 1.0);
  m.set_objective(0, -1.0);
  BnbOptions opts;
  opts.collect_trace = true;
  const BnbResult res = branch_and_bound(m, opts);
  REQUIRE(res.status == BnbStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-1.0));
  CHECK(res.nodes_explored == 1);
  CHECK(res.trace.branch_columns.empty());
}

TEST_CASE("six-binary knapsack equals exhaustive enumeration") {
  // min -sum(v_j b_j) s.t. sum(w_j b_j) <= W.
  const double values[6] = {4, 7, 5, 3, 6, 8};
  const double weights[6] = {2, 5, 3, 1, 4, 6};
  MilpModel m;
  Row cap;
  cap.sense = RowSense::LessEqual;
  cap.rhs = 10.0;
  for (int j = 0; j < 6; ++j) {
    m.add_var({"b", j}, VarKind::Binary, 0.0, 1.0);
    m.set_objective(j, -values[j]);
    cap.terms.push_back({j, weights[j]});
  }
  m.add_row(cap);

  double best = 0.0;
  for (int mask = 0; mask < 64; ++mask) {
    double v = 0.0, w = 0.0;
    for (int j = 0; j < 6; ++j)
      if ((mask >> j) & 1) {
        v += values[j];
        w += weights[j];
      }
    if (w <= 10.0) best = std::max(best, v);
  }

  const BnbResult res = branch_and_bound(m);
  REQUIRE(res.incumbent.has_value());
  CHECK(res.status == BnbStatus::Optimal);
  CHECK(-res.objective == doctest::Approx(best));
  CHECK(res.gap == doctest::Approx(0.0));
}

TEST_CASE("random MILPs with up to 12 binaries match brute force") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    MilpModel m = random_milp(rng, 6 + static_cast<int>(trial % 7), 3);
    const double oracle = enumerate_optimum(m);
    const BnbResult res = branch_and_bound(m);
    if (std::isinf(oracle)) {
      CHECK(res.status == BnbStatus::Infeasible);
    } else {
      REQUIRE(res.incumbent.has_value());
      CHECK(res.objective == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("priority classes drive the first branching decision") {
  // Two fractional binaries; the lower-priority one is more fractional, the
  // higher-priority one must still branch first.
  MilpModel m;
  m.add_var({"y", 0}, VarKind::Binary, 0.0, 1.0, 10);
  m.add_var({"x", 1}, VarKind::Binary, 0.0, 1.0, 1);
  m.set_objective(0, -1.0);
  m.set_objective(1, -1.0);
  Row r1;  // y 0.9-fractional
  r1.sense = RowSense::LessEqual;
  r1.rhs = 0.9;
  r1.terms.push_back({0, 1.0});
  m.add_row(r1);
  Row r2;  // x 0.5-fractional
  r2.sense = RowSense::LessEqual;
  r2.rhs = 0.5;
  r2.terms.push_back({1, 1.0});
  m.add_row(r2);
  BnbOptions opts;
  opts.collect_trace = true;
  const BnbResult res = branch_and_bound(m, opts);
  REQUIRE(!res.trace.branch_columns.empty());
  CHECK(res.trace.branch_columns.front() == 0);
}

TEST_CASE("warm_fix pins bounds and preserves optimality direction") {
  MilpModel m;
  m.add_var({"y", 0}, VarKind::Binary, 0.0, 1.0);
  m.add_var({"y", 1}, VarKind::Binary, 0.0, 1.0);
  m.set_objective(0, 2.0);
  m.set_objective(1, 3.0);
  Row row;  // y0 + y1 >= 1
  row.sense = RowSense::GreaterEqual;
  row.rhs = 1.0;
  row.terms.push_back({0, 1.0});
  row.terms.push_back({1, 1.0});
  m.add_row(row);

  SUBCASE("single fix") {
    const std::vector<std::pair<int, double>> fixed{{1, 1.0}};
    const MilpModel pinned = warm_fix(m, fixed);
    CHECK(pinned.var(1).lo == 1.0);
    CHECK(pinned.var(1).hi == 1.0);
  }
  SUBCASE("fixing every binary leaves a pure LP") {
    const std::vector<std::pair<int, double>> fixed{{0, 1.0}, {1, 0.0}};
    const auto lp = solve_lp(warm_fix(m, fixed));
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.objective == doctest::Approx(2.0));
  }
  SUBCASE("fixed-model optimum dominates the parent optimum") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      MilpModel rm = random_milp(rng, 7, 2);
      const BnbResult parent = branch_and_bound(rm);
      if (!parent.incumbent.has_value()) continue;
      std::vector<std::pair<int, double>> fixed;
      for (int j = 0; j < rm.num_vars(); ++j)
        if (rm.var(j).kind == VarKind::Binary)
          fixed.emplace_back(j, std::round((*parent.incumbent)[static_cast<std::size_t>(j)]));
      const auto lp = solve_lp(warm_fix(rm, fixed));
      REQUIRE(lp.status == LpStatus::Optimal);
      CHECK(lp.objective >= parent.objective - 1e-6);
    }
  }
  SUBCASE("fixing outside bounds throws") {
    const std::vector<std::pair<int, double>> fixed{{0, 2.0}};
    CHECK_THROWS_AS(warm_fix(m, fixed), std::invalid_argument);
  }
}

TEST_CASE("weak duality and monotone incumbents over a run") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 10; ++trial) {
    MilpModel m = random_milp(rng, 9, 3);
    BnbOptions opts;
    opts.collect_trace = true;
    const BnbResult res = branch_and_bound(m, opts);
    if (!res.incumbent.has_value()) continue;
    CHECK(res.lower_bound <= res.objective + 1e-9);
    for (std::size_t k = 1; k < res.trace.incumbent_objectives.size(); ++k)
      CHECK(res.trace.incumbent_objectives[k] <=
            res.trace.incumbent_objectives[k - 1] + 1e-12);
  }
}

TEST_CASE("two runs are bit-identical") {
  std::mt19937_64 rng(321);
  MilpModel m = random_milp(rng, 10, 4);
  const BnbResult a = branch_and_bound(m);
  const BnbResult b = branch_and_bound(m);
  CHECK(a.nodes_explored == b.nodes_explored);
  CHECK(a.objective == b.objective);
  REQUIRE(a.incumbent.has_value() == b.incumbent.has_value());
  if (a.incumbent.has_value()) {
    for (std::size_t j = 0; j < a.incumbent->size(); ++j)
      CHECK((*a.incumbent)[j] == (*b.incumbent)[j]);
  }
}

TEST_CASE("gap target stops early with a certified bound") {
  std::mt19937_64 rng(31);
  MilpModel m = random_milp(rng, 12, 2);
  BnbOptions loose;
  loose.gap_target = 0.5;
  const BnbResult res = branch_and_bound(m, loose);
  if (res.incumbent.has_value() && res.status == BnbStatus::GapReached) {
    CHECK(res.gap <= 0.5 + 1e-9);
    CHECK(res.gap > 0.0);
    CHECK(res.lower_bound <= res.objective);
  }
}

TEST_CASE("warm start seeds the incumbent") {
  MilpModel m;
  m.add_var({"y", 0}, VarKind::Binary, 0.0, 1.0);
  m.set_objective(0, 1.0);
  Row row;  // y >= 1 forces cost 1
  row.sense = RowSense::GreaterEqual;
  row.rhs = 1.0;
  row.terms.push_back({0, 1.0});
  m.add_row(row);
  backhaul::milp::WarmStart warm{{1.0}, 1.0};
  const BnbResult res = branch_and_bound(m, {}, warm);
  REQUIRE(res.incumbent.has_value());
  CHECK(res.objective == doctest::Approx(1.0));
  CHECK(res.status == BnbStatus::Optimal);
}

}  // namespace
