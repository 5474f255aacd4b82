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

#include "backhaul/capacity/capacity.hpp"
#include "backhaul/milp/simplex.hpp"

namespace {

using backhaul::capacity::build_tangent_grid;
using backhaul::capacity::capacity;
using backhaul::capacity::CapacityFn;
using backhaul::capacity::emit_cuts;
using backhaul::capacity::emit_cuts_fixed_bandwidth;
using backhaul::capacity::LinearCut;
using backhaul::capacity::TangentGrid;

TEST_CASE("capacity basics") {
  const CapacityFn fn{1e-9, 4e-21};
  CHECK(capacity(fn, 0.0, 56e6) == 0.0);
  CHECK(capacity(fn, 0.1, 0.0) == 0.0);
  // Continuous extension near the bandwidth singularity.
  CHECK(capacity(fn, 0.1, 1e-6) < 1e-3);
  CHECK_THROWS_AS(capacity(fn, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(capacity(fn, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(capacity(CapacityFn{0.0, 1.0}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("capacity matches an independent high-precision evaluation") {
  // 50-digit arithmetic gives C(0.0794 W, 56 MHz; g = 1e-9, N0 = 4e-21)
  // = 474519405.1431663... bit/s.
  const CapacityFn fn{1e-9, 4e-21};
  const double c = capacity(fn, 0.0794, 56e6);
  CHECK(c == doctest::Approx(474519405.1431663).epsilon(1e-12));
}

TEST_CASE("analytic slopes match central finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lg(-13.0, -7.0);
  std::uniform_real_distribution<double> lp(-3.0, 0.0);
  std::uniform_real_distribution<double> lw(6.0, 9.0);
  for (int trial = 0; trial < 50; ++trial) {
    const CapacityFn fn{std::pow(10.0, lg(rng)), 4e-21};
    const double p = std::pow(10.0, lp(rng));
    const double w = std::pow(10.0, lw(rng));
    const double hp = p * 1e-5;
    const double hw = w * 1e-5;
    const double fd_p = (capacity(fn, p + hp, w) - capacity(fn, p - hp, w)) / (2 * hp);
    const double fd_w = (capacity(fn, p, w + hw) - capacity(fn, p, w - hw)) / (2 * hw);
    CHECK(backhaul::capacity::capacity_slope_power(fn, p, w) ==
          doctest::Approx(fd_p).epsilon(1e-5));
    CHECK(backhaul::capacity::capacity_slope_bandwidth(fn, p, w) ==
          doctest::Approx(fd_w).epsilon(1e-5));
  }
}

TEST_CASE("minimal grid is a single tangent plane at the maxima") {
  const CapacityFn fn{1e-10, 4e-21};
  const TangentGrid grid = build_tangent_grid(fn, 0.08, 300e6, 1, 1);
  CHECK(grid.planes.size() == 1);
  CHECK(grid.power_points.size() == 1);
  CHECK(grid.power_points[0] == doctest::Approx(0.08));
  CHECK(grid.bandwidth_points[0] == doctest::Approx(300e6));
  CHECK_THROWS_AS(build_tangent_grid(fn, -1.0, 1.0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_tangent_grid(fn, 1.0, 1.0, 0, 1), std::invalid_argument);
}

TEST_CASE("tangent planes are exact at their expansion points") {
  const CapacityFn fn{3e-11, 4e-21};
  const TangentGrid grid = build_tangent_grid(fn, 0.0794, 336e6, 5, 6);
  for (const auto& plane : grid.planes) {
    const double eval = plane.intercept + plane.slope_p * plane.p0 + plane.slope_w * plane.w0;
    CHECK(eval == doctest::Approx(plane.value).epsilon(1e-9));
    // The whole family evaluated there cannot dip below the capacity either.
    CHECK(grid.eval_min(plane.p0, plane.w0) >=
          capacity(fn, plane.p0, plane.w0) * (1.0 - 1e-9));
  }
}

TEST_CASE("tangent envelope upper-bounds the capacity on random samples") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int inst = 0; inst < 10; ++inst) {
    const CapacityFn fn{std::pow(10.0, -12.0 + 4.0 * unit(rng)), 4e-21};
    const double p_max = 0.02 + unit(rng);
    const double w_max = (0.5 + unit(rng)) * 3e8;
    const TangentGrid grid = build_tangent_grid(fn, p_max, w_max, 8, 8);
    for (int s = 0; s < 1000; ++s) {
      const double p = unit(rng) * p_max;
      const double w = unit(rng) * w_max;
      const double cap = capacity(fn, p, w);
      CHECK(grid.eval_min(p, w) >= cap - 1e-9 * std::max(1.0, cap));
    }
  }
}

TEST_CASE("refining the grid never loosens the envelope") {
  const CapacityFn fn{1e-10, 4e-21};
  const double p_max = 0.0794, w_max = 336e6;
  const TangentGrid coarse = build_tangent_grid(fn, p_max, w_max, 4, 4);
  const TangentGrid fine = build_tangent_grid(fn, p_max, w_max, 8, 8);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 2000; ++s) {
    const double p = unit(rng) * p_max;
    const double w = unit(rng) * w_max;
    CHECK(fine.eval_min(p, w) <= coarse.eval_min(p, w) + 1e-9);
  }
}

TEST_CASE("emit_cuts cardinality and tangency") {
  const CapacityFn fn{1e-10, 4e-21};
  const TangentGrid grid = build_tangent_grid(fn, 0.0794, 336e6, 2, 2);
  const auto cuts = emit_cuts(grid);
  REQUIRE(cuts.size() == 4);
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    // Each cut holds with equality at its own expansion point.
    const auto& plane = grid.planes[k];
    const double lhs = cuts[k].coef_f * plane.value + cuts[k].coef_p * plane.p0 +
                       cuts[k].coef_w * plane.w0;
    CHECK(lhs == doctest::Approx(cuts[k].rhs).epsilon(1e-9));
  }
}

TEST_CASE("LP max flow under cuts dominates capacity at a fixed operating point") {
  // Small LP cross-check: maximize f subject to the cut family with (p, w)
  // pinned; the optimum must sit at or above the true capacity.
  const CapacityFn fn{2e-11, 4e-21};
  const double p_max = 0.0794, w_max = 336e6;
  const TangentGrid grid = build_tangent_grid(fn, p_max, w_max, 6, 6);
  const auto cuts = emit_cuts(grid);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int s = 0; s < 20; ++s) {
    const double p = unit(rng) * p_max;
    const double w = unit(rng) * w_max;
    backhaul::milp::MilpModel m;
    const int f = m.add_var({"f"}, backhaul::milp::VarKind::Continuous, 0.0, 1e12);
    m.set_objective(f, -1.0);  // maximize f
    for (const LinearCut& cut : cuts) {
      backhaul::milp::Row row;
      row.sense = backhaul::milp::RowSense::LessEqual;
      row.terms.push_back({f, cut.coef_f});
      row.rhs = cut.rhs - cut.coef_p * p - cut.coef_w * w;
      m.add_row(row);
    }
    const auto lp = backhaul::milp::solve_lp(m);
    REQUIRE(lp.status == backhaul::milp::LpStatus::Optimal);
    const double cap = capacity(fn, p, w);
    CHECK(lp.x[0] >= cap * (1.0 - 1e-9));
    CHECK(lp.x[0] == doctest::Approx(grid.eval_min(p, w)).epsilon(1e-9));
  }
}

TEST_CASE("fixed-bandwidth cuts") {
  const CapacityFn fn{5e-12, 4e-21};
  const double p_max = 0.0794, w = 40e6;

  SUBCASE("single point is exact at p_max") {
    const std::vector<double> pts{p_max};
    const auto cuts = emit_cuts_fixed_bandwidth(fn, w, pts);
    REQUIRE(cuts.size() == 1);
    const double cap = capacity(fn, p_max, w);
    CHECK(cuts[0].coef_f * cap + cuts[0].coef_p * p_max ==
          doctest::Approx(cuts[0].rhs).epsilon(1e-9));
    CHECK(cuts[0].coef_w == 0.0);
  }

  SUBCASE("family upper-bounds the fixed-bandwidth capacity") {
    std::vector<double> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(p_max / std::exp2(5.0 - i));
    const auto cuts = emit_cuts_fixed_bandwidth(fn, w, pts);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 2000; ++s) {
      const double p = unit(rng) * p_max;
      double envelope = 1e300;
      for (const LinearCut& cut : cuts)
        envelope = std::min(envelope, cut.rhs - cut.coef_p * p);
      const double cap = capacity(fn, p, w);
      CHECK(envelope >= cap - 1e-9 * std::max(1.0, cap));
    }
  }

  SUBCASE("intercepts stay nonnegative at zero power") {
    std::vector<double> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(p_max / std::exp2(5.0 - i));
    for (const LinearCut& cut : emit_cuts_fixed_bandwidth(fn, w, pts))
      CHECK(cut.rhs >= 0.0);
  }

  SUBCASE("non-positive bandwidth rejected") {
    const std::vector<double> pts{p_max};
    CHECK_THROWS_AS(emit_cuts_fixed_bandwidth(fn, 0.0, pts), std::invalid_argument);
  }
}

}  // namespace
