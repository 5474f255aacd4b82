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
#include <limits>

#include "backhaul/kernels/kernels.hpp"

namespace backhaul::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::fabs(x[i]));
  return best;
}

double min_plane_scalar(const double* c0, const double* mp, const double* mw,
                        std::size_t n, double p, double w) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = c0[i] + mp[i] * p + mw[i] * w;
    if (v < best) best = v;
  }
  return best;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops kOps{"scalar",    dot_scalar,     axpy_scalar,
                        scale_scalar, max_abs_scalar, min_plane_scalar};
  return kOps;
}

}  // namespace backhaul::kernels
