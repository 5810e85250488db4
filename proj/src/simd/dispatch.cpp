// Copyright (c) 2026 The igprm Authors
//
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
#include <string>

#include "igprm/simd/kernels.hpp"

namespace igprm::simd
{

#if IGPRM_HAVE_AVX2
const Kernels * avx2_kernels_table();
#endif
#if IGPRM_HAVE_NEON
const Kernels * neon_kernels_table();
#endif

std::string_view isa_name(Isa isa)
{
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const Kernels * avx2_kernels()
{
#if IGPRM_HAVE_AVX2
  static const bool supported =
    __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_kernels_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels * neon_kernels()
{
#if IGPRM_HAVE_NEON
  // Advanced SIMD is mandatory on AArch64.
  return neon_kernels_table();
#else
  return nullptr;
#endif
}

Isa detect_isa()
{
  if (avx2_kernels() != nullptr) {
    return Isa::Avx2;
  }
  if (neon_kernels() != nullptr) {
    return Isa::Neon;
  }
  return Isa::Scalar;
}

namespace
{

const Kernels & select()
{
  const Kernels * best = &scalar_kernels();
  if (auto * k = avx2_kernels()) {
    best = k;
  } else if (auto * k = neon_kernels()) {
    best = k;
  }
  const char * env = std::getenv("IGPRM_SIMD");
  if (env == nullptr) {
    return *best;
  }
  const std::string want(env);
  if (want == "scalar") {
    return scalar_kernels();
  }
  if (want == "avx2" && avx2_kernels() != nullptr) {
    return *avx2_kernels();
  }
  if (want == "neon" && neon_kernels() != nullptr) {
    return *neon_kernels();
  }
  return *best;
}

}  // namespace

const Kernels & kernels()
{
  static const Kernels & active = select();
  return active;
}

}  // namespace igprm::simd
