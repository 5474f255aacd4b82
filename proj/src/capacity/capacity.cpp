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

#include "backhaul/capacity/capacity.hpp"

#include <cmath>
#include <stdexcept>

#include "backhaul/kernels/kernels.hpp"

namespace backhaul::capacity {
namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_fn(const CapacityFn& c) {
  if (!(c.gain > 0.0) || !(c.noise_density > 0.0))
    throw std::invalid_argument("capacity: gain and noise density must be positive");
}

}  // namespace

double capacity(const CapacityFn& c, double power_w, double bandwidth_hz) {
  check_fn(c);
  if (power_w < 0.0 || bandwidth_hz < 0.0)
    throw std::invalid_argument("capacity: negative power or bandwidth");
  if (power_w == 0.0 || bandwidth_hz == 0.0) return 0.0;
  const double snr = power_w * c.gain / (c.noise_density * bandwidth_hz);
  return bandwidth_hz * std::log1p(snr) / kLn2;
}

double capacity_slope_power(const CapacityFn& c, double power_w, double bandwidth_hz) {
  check_fn(c);
  return bandwidth_hz * c.gain /
         (kLn2 * (c.noise_density * bandwidth_hz + power_w * c.gain));
}

double capacity_slope_bandwidth(const CapacityFn& c, double power_w, double bandwidth_hz) {
  check_fn(c);
  if (power_w == 0.0) return 0.0;
  const double snr = power_w * c.gain / (c.noise_density * bandwidth_hz);
  return std::log1p(snr) / kLn2 - snr / (kLn2 * (1.0 + snr));
}

double TangentGrid::eval_min(double p, double w) const {
  return kernels::ops().min_plane(plane_intercepts.data(), plane_slopes_p.data(),
                                  plane_slopes_w.data(), plane_intercepts.size(), p, w);
}

TangentGrid build_tangent_grid(const CapacityFn& c, double p_max, double w_max,
                               int k_p, int k_w) {
  check_fn(c);
  if (!(p_max > 0.0) || !(w_max > 0.0))
    throw std::invalid_argument("build_tangent_grid: non-positive maxima");
  if (k_p < 1 || k_w < 1)
    throw std::invalid_argument("build_tangent_grid: grid counts must be >= 1");

  TangentGrid grid;
  grid.fn = c;
  grid.power_points.reserve(static_cast<std::size_t>(k_p));
  grid.bandwidth_points.reserve(static_cast<std::size_t>(k_w));
  for (int i = 0; i < k_p; ++i)
    grid.power_points.push_back(p_max / std::exp2(static_cast<double>(k_p - 1 - i)));
  for (int j = 0; j < k_w; ++j)
    grid.bandwidth_points.push_back(w_max / std::exp2(static_cast<double>(k_w - 1 - j)));

  grid.planes.reserve(static_cast<std::size_t>(k_p) * static_cast<std::size_t>(k_w));
  for (double p0 : grid.power_points) {
    for (double w0 : grid.bandwidth_points) {
      TangentPlane plane;
      plane.p0 = p0;
      plane.w0 = w0;
      plane.value = capacity(c, p0, w0);
      plane.slope_p = capacity_slope_power(c, p0, w0);
      plane.slope_w = capacity_slope_bandwidth(c, p0, w0);
      plane.intercept = plane.value - plane.slope_p * p0 - plane.slope_w * w0;
      grid.planes.push_back(plane);
      grid.plane_intercepts.push_back(plane.intercept);
      grid.plane_slopes_p.push_back(plane.slope_p);
      grid.plane_slopes_w.push_back(plane.slope_w);
    }
  }
  return grid;
}

std::vector<LinearCut> emit_cuts(const TangentGrid& grid) {
  std::vector<LinearCut> cuts;
  cuts.reserve(grid.planes.size());
  for (const TangentPlane& plane : grid.planes) {
    // f - m_p p - m_W w <= value - m_p p0 - m_W w0
    cuts.push_back(LinearCut{1.0, -plane.slope_p, -plane.slope_w, plane.intercept});
  }
  return cuts;
}

std::vector<LinearCut> emit_cuts_fixed_bandwidth(const CapacityFn& c, double w_fixed,
                                                 std::span<const double> power_points) {
  if (!(w_fixed > 0.0))
    throw std::invalid_argument("emit_cuts_fixed_bandwidth: non-positive bandwidth");
  std::vector<LinearCut> cuts;
  cuts.reserve(power_points.size());
  for (double p0 : power_points)
    cuts.push_back(tangent_cut_fixed_bandwidth_at(c, w_fixed, p0));
  return cuts;
}

LinearCut tangent_cut_at(const CapacityFn& c, double p0, double w0) {
  const double value = capacity(c, p0, w0);
  const double mp = capacity_slope_power(c, p0, w0);
  const double mw = capacity_slope_bandwidth(c, p0, w0);
  return LinearCut{1.0, -mp, -mw, value - mp * p0 - mw * w0};
}

LinearCut tangent_cut_fixed_bandwidth_at(const CapacityFn& c, double w_fixed, double p0) {
  const double value = capacity(c, p0, w_fixed);
  const double mp = capacity_slope_power(c, p0, w_fixed);
  return LinearCut{1.0, -mp, 0.0, value - mp * p0};
}

}  // namespace backhaul::capacity
