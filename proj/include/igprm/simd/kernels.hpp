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

#pragma once

// Data-parallel inner loops shared by the cost network, the projection and
// the nearest-neighbour / DTW distance code. Every routine has a portable
// scalar reference; vector variants must agree with it (bit-exact for the
// f64 distance kernel, within float rounding for the f32 ones).

#include <cstddef>
#include <string_view>

namespace igprm::simd
{

enum class Isa
{
  Scalar,
  Avx2,
  Neon,
};

std::string_view isa_name(Isa isa);

struct Kernels
{
  Isa isa;

  /// y[i] += a * x[i]
  void (*axpy_f32)(float a, const float * x, float * y, std::size_t n);

  float (*dot_f32)(const float * a, const float * b, std::size_t n);

  /// x[i] = max(x[i], 0)
  void (*relu_f32)(float * x, std::size_t n);

  /// Accumulates one 3x3 filter tap set into an output plane.
  /// `in` points at the top-left of a zero-padded (height + 2) x (width + 2)
  /// plane with row stride `in_stride`; out[y * width + x] +=
  /// sum_{dy,dx} w[dy * 3 + dx] * in[(y + dy) * in_stride + x + dx].
  void (*conv3x3_accum_f32)(
    const float * in, std::size_t in_stride, const float * w,
    float * out, std::size_t width, std::size_t height);

  /// out[i] = (xs[i] - px)^2 + (ys[i] - py)^2, evaluated without fused
  /// multiply-add so every variant returns identical bits.
  void (*sq_dist_f64)(
    double px, double py, const double * xs, const double * ys,
    double * out, std::size_t n);
};

/// Kernels selected for this process. Chosen once from the CPU features,
/// overridable with IGPRM_SIMD=scalar|avx2|neon.
const Kernels & kernels();

const Kernels & scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks it.
const Kernels * avx2_kernels();
const Kernels * neon_kernels();

/// Best variant usable on this CPU, ignoring the environment override.
Isa detect_isa();

}  // namespace igprm::simd
