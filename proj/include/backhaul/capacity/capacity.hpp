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

#pragma once

#include <span>
#include <vector>

namespace backhaul::capacity {

// Shannon capacity of a point-to-point link: C(p, W) = W log2(1 + p g / (N0 W)).
// Jointly concave and 1-homogeneous in (p, W).
struct CapacityFn {
  double gain = 0.0;           // linear power gain, > 0
  double noise_density = 0.0;  // N0, W/Hz, > 0
};

// bits/s; continuous extension: 0 when p = 0 or w = 0. Throws
// std::invalid_argument on negative inputs or non-positive parameters.
double capacity(const CapacityFn& c, double power_w, double bandwidth_hz);

// Analytic partials of C. Defined for p >= 0, w > 0 (slope_power) and
// p > 0 or p = 0, w > 0 (slope_bandwidth; equals 0 at p = 0).
double capacity_slope_power(const CapacityFn& c, double power_w, double bandwidth_hz);
double capacity_slope_bandwidth(const CapacityFn& c, double power_w, double bandwidth_hz);

// One first-order Taylor plane of C at (p0, w0):
//   f <= value + slope_p (p - p0) + slope_w (w - w0)
// stored with the precomputed intercept = value - slope_p p0 - slope_w w0 so
// the plane evaluates as intercept + slope_p p + slope_w w.
struct TangentPlane {
  double p0 = 0.0;
  double w0 = 0.0;
  double value = 0.0;
  double slope_p = 0.0;
  double slope_w = 0.0;
  double intercept = 0.0;
};

// Tangent planes at a geometric grid of expansion points. Grids are strictly
// increasing, exclude 0 and end at the maxima: point i of k is max / 2^(k-1-i).
struct TangentGrid {
  CapacityFn fn;
  std::vector<double> power_points;
  std::vector<double> bandwidth_points;
  std::vector<TangentPlane> planes;  // row-major: power index outer
  // Structure-of-arrays mirror for the sampling kernels.
  std::vector<double> plane_intercepts;
  std::vector<double> plane_slopes_p;
  std::vector<double> plane_slopes_w;

  // min over planes of the tangent value at (p, w); an upper bound on
  // capacity(p, w) by concavity.
  double eval_min(double p, double w) const;
};

// k_p x k_w tangent planes over (0, p_max] x (0, w_max]. Throws
// std::invalid_argument on non-positive maxima or k < 1.
TangentGrid build_tangent_grid(const CapacityFn& c, double p_max, double w_max,
                               int k_p, int k_w);

// Linear constraint coef_f f + coef_p p + coef_w w <= rhs.
struct LinearCut {
  double coef_f = 1.0;
  double coef_p = 0.0;
  double coef_w = 0.0;
  double rhs = 0.0;
};

// f <= C_ij + m_p (p - p_i) + m_W (w - w_j), one cut per grid plane.
std::vector<LinearCut> emit_cuts(const TangentGrid& grid);

// Fixed-bandwidth family: f <= C(p_t, w_fixed) + m_p(p_t) (p - p_t), linear
// in (f, p) only; coef_w is 0 in every returned cut.
std::vector<LinearCut> emit_cuts_fixed_bandwidth(const CapacityFn& c, double w_fixed,
                                                 std::span<const double> power_points);

// A single tangent cut at an arbitrary expansion point (used by the adaptive
// outer-approximation passes).
LinearCut tangent_cut_at(const CapacityFn& c, double p0, double w0);
LinearCut tangent_cut_fixed_bandwidth_at(const CapacityFn& c, double w_fixed, double p0);

}  // namespace backhaul::capacity
