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

#include <cstddef>

namespace backhaul::kernels {

// Dense double-precision vector kernels used by the simplex inner loops and
// the tangent-envelope sampling paths. Scalar reference implementations live
// in kernels_scalar.cpp; AVX2/NEON variants are picked at runtime. SIMD
// results may differ from scalar in the last bits (reassociation, FMA); the
// dispatch choice is fixed per process so repeated runs stay bit-identical.
struct Ops {
  const char* name = "scalar";

  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x[i] *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // max_i |x[i]|
  double (*max_abs)(const double* x, std::size_t n);
  // min_i (c0[i] + mp[i]*p + mw[i]*w) — evaluates a family of planes given
  // by intercept and slopes at a single query point.
  double (*min_plane)(const double* c0, const double* mp, const double* mw,
                      std::size_t n, double p, double w);
};

// Reference implementation (always available).
const Ops& scalar_ops();

// Best variant supported by this CPU, honoring the BACKHAUL_SIMD environment
// override ("scalar", "avx2", "neon") when set.
const Ops& ops();

// Variant accessors for equivalence tests; nullptr when not compiled in or
// not supported by the running CPU.
const Ops* avx2_ops();
const Ops* neon_ops();

}  // namespace backhaul::kernels
