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

#include "igprm/simd/kernels.hpp"

#include <arm_neon.h>

#include <algorithm>

namespace igprm::simd
{
namespace
{

constexpr std::size_t F = 4;  // floats per float32x4_t

void axpy(float a, const float * x, float * y, std::size_t n)
{
  const float32x4_t va = vdupq_n_f32(a);
  std::size_t i = 0;
  for (; i + F <= n; i += F) {
    vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), va, vld1q_f32(x + i)));
  }
  for (; i < n; ++i) {
    y[i] += a * x[i];
  }
}

float dot(const float * a, const float * b, std::size_t n)
{
  float32x4_t acc = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + F <= n; i += F) {
    acc = vfmaq_f32(acc, vld1q_f32(a + i), vld1q_f32(b + i));
  }
  float sum = vaddvq_f32(acc);
  for (; i < n; ++i) {
    sum += a[i] * b[i];
  }
  return sum;
}

void relu(float * x, std::size_t n)
{
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + F <= n; i += F) {
    vst1q_f32(x + i, vmaxq_f32(vld1q_f32(x + i), zero));
  }
  for (; i < n; ++i) {
    x[i] = std::max(x[i], 0.0f);
  }
}

void conv3x3_accum(
  const float * in, std::size_t in_stride, const float * w,
  float * out, std::size_t width, std::size_t height)
{
  float32x4_t wv[9];
  for (int t = 0; t < 9; ++t) {
    wv[t] = vdupq_n_f32(w[t]);
  }
  for (std::size_t y = 0; y < height; ++y) {
    float * orow = out + y * width;
    const float * r0 = in + y * in_stride;
    const float * r1 = r0 + in_stride;
    const float * r2 = r1 + in_stride;
    std::size_t x = 0;
    for (; x + F <= width; x += F) {
      float32x4_t acc = vld1q_f32(orow + x);
      acc = vfmaq_f32(acc, wv[0], vld1q_f32(r0 + x));
      acc = vfmaq_f32(acc, wv[1], vld1q_f32(r0 + x + 1));
      acc = vfmaq_f32(acc, wv[2], vld1q_f32(r0 + x + 2));
      acc = vfmaq_f32(acc, wv[3], vld1q_f32(r1 + x));
      acc = vfmaq_f32(acc, wv[4], vld1q_f32(r1 + x + 1));
      acc = vfmaq_f32(acc, wv[5], vld1q_f32(r1 + x + 2));
      acc = vfmaq_f32(acc, wv[6], vld1q_f32(r2 + x));
      acc = vfmaq_f32(acc, wv[7], vld1q_f32(r2 + x + 1));
      acc = vfmaq_f32(acc, wv[8], vld1q_f32(r2 + x + 2));
      vst1q_f32(orow + x, acc);
    }
    for (; x < width; ++x) {
      float acc = orow[x];
      acc += w[0] * r0[x] + w[1] * r0[x + 1] + w[2] * r0[x + 2];
      acc += w[3] * r1[x] + w[4] * r1[x + 1] + w[5] * r1[x + 2];
      acc += w[6] * r2[x] + w[7] * r2[x + 1] + w[8] * r2[x + 2];
      orow[x] = acc;
    }
  }
}

void sq_dist(
  double px, double py, const double * xs, const double * ys,
  double * out, std::size_t n)
{
  const float64x2_t vx = vdupq_n_f64(px);
  const float64x2_t vy = vdupq_n_f64(py);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vy);
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double dx2 = dx * dx;
    const double dy2 = dy * dy;
    out[i] = dx2 + dy2;
  }
}

}  // namespace

const Kernels * neon_kernels_table()
{
  static const Kernels table{
    Isa::Neon, &axpy, &dot, &relu, &conv3x3_accum, &sq_dist,
  };
  return &table;
}

}  // namespace igprm::simd
