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

#include <cstdlib>
#include <cstring>

#include "backhaul/kernels/kernels.hpp"

namespace backhaul::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2_ops_impl();
#endif
#if defined(__aarch64__)
const Ops* neon_ops_impl();
#endif

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return avx2_ops_impl();
  }
#endif
  return nullptr;
}

const Ops* neon_ops() {
#if defined(__aarch64__)
  return neon_ops_impl();
#else
  return nullptr;
#endif
}

namespace {

const Ops& select() {
  const char* forced = std::getenv("BACKHAUL_SIMD");
  if (forced != nullptr) {
    if (std::strcmp(forced, "scalar") == 0) return scalar_ops();
    if (std::strcmp(forced, "avx2") == 0 && avx2_ops() != nullptr) return *avx2_ops();
    if (std::strcmp(forced, "neon") == 0 && neon_ops() != nullptr) return *neon_ops();
    return scalar_ops();
  }
  if (const Ops* v = avx2_ops()) return *v;
  if (const Ops* v = neon_ops()) return *v;
  return scalar_ops();
}

}  // namespace

const Ops& ops() {
  static const Ops& chosen = select();
  return chosen;
}

}  // namespace backhaul::kernels
