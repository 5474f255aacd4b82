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

// NEON (AArch64) variants of the dense kernels. NEON is baseline on
// AArch64, so no extra compile flags are required.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "backhaul/kernels/kernels.hpp"

namespace backhaul::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vfmaq_f64(vy, va, vld1q_f64(x + i));
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_neon(double alpha, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

double max_abs_neon(const double* x, std::size_t n) {
  float64x2_t best = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    best = vmaxq_f64(best, vabsq_f64(vld1q_f64(x + i)));
  }
  double acc = vmaxvq_f64(best);
  for (; i < n; ++i) acc = std::max(acc, std::fabs(x[i]));
  return acc;
}

double min_plane_neon(const double* c0, const double* mp, const double* mw,
                      std::size_t n, double p, double w) {
  const float64x2_t vp = vdupq_n_f64(p);
  const float64x2_t vw = vdupq_n_f64(w);
  float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vfmaq_f64(vld1q_f64(c0 + i), vld1q_f64(mp + i), vp);
    v = vfmaq_f64(v, vld1q_f64(mw + i), vw);
    best = vminq_f64(best, v);
  }
  double acc = vminvq_f64(best);
  for (; i < n; ++i) {
    const double v = c0[i] + mp[i] * p + mw[i] * w;
    if (v < acc) acc = v;
  }
  return acc;
}

}  // namespace

const Ops* neon_ops_impl() {
  static const Ops kOps{"neon",     dot_neon,     axpy_neon,
                        scale_neon, max_abs_neon, min_plane_neon};
  return &kOps;
}

}  // namespace backhaul::kernels

#endif  // __aarch64__
