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
#include <vector>

#include <doctest.h>

#include "backhaul/kernels/kernels.hpp"

namespace {

using backhaul::kernels::Ops;

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

std::vector<const Ops*> simd_variants() {
  std::vector<const Ops*> out;
  if (const Ops* v = backhaul::kernels::avx2_ops()) out.push_back(v);
  if (const Ops* v = backhaul::kernels::neon_ops()) out.push_back(v);
  return out;
}

TEST_CASE("simd variants match the scalar reference") {
  const Ops& ref = backhaul::kernels::scalar_ops();
  std::mt19937_64 rng(7);
  for (const Ops* variant : simd_variants()) {
    CAPTURE(variant->name);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 17u, 64u, 255u, 1024u}) {
      auto a = random_vec(rng, n, 3.0);
      auto b = random_vec(rng, n, 2.0);

      const double dref = ref.dot(a.data(), b.data(), n);
      const double dv = variant->dot(a.data(), b.data(), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::fabs(a[i] * b[i]);
      CHECK(std::fabs(dref - dv) <= 1e-13 * (1.0 + mag));

      auto y1 = random_vec(rng, n);
      auto y2 = y1;
      ref.axpy(1.7, a.data(), y1.data(), n);
      variant->axpy(1.7, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::fabs(y1[i] - y2[i]) <= 1e-13 * (1.0 + std::fabs(y1[i])));

      auto s1 = a;
      auto s2 = a;
      ref.scale(-0.3, s1.data(), n);
      variant->scale(-0.3, s2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(s1[i] == doctest::Approx(s2[i]).epsilon(1e-14));

      CHECK(ref.max_abs(a.data(), n) == variant->max_abs(a.data(), n));

      if (n > 0) {
        auto c0 = random_vec(rng, n, 5.0);
        auto mp = random_vec(rng, n, 4.0);
        auto mw = random_vec(rng, n, 4.0);
        const double p = 0.37, w = 1.21;
        const double m1 = ref.min_plane(c0.data(), mp.data(), mw.data(), n, p, w);
        const double m2 = variant->min_plane(c0.data(), mp.data(), mw.data(), n, p, w);
        CHECK(std::fabs(m1 - m2) <= 1e-12 * (1.0 + std::fabs(m1)));
      }
    }
  }
}

TEST_CASE("dispatch selects a usable variant") {
  const Ops& active = backhaul::kernels::ops();
  const double a[4] = {1.0, 2.0, 3.0, 4.0};
  const double b[4] = {4.0, 3.0, 2.0, 1.0};
  CHECK(active.dot(a, b, 4) == doctest::Approx(20.0));
  CHECK(active.max_abs(a, 4) == doctest::Approx(4.0));
}

TEST_CASE("min_plane empty family yields +infinity") {
  const Ops& active = backhaul::kernels::ops();
  CHECK(std::isinf(active.min_plane(nullptr, nullptr, nullptr, 0, 1.0, 1.0)));
}

}  // namespace
