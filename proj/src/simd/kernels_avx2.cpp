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

#include <immintrin.h>

#include <algorithm>

namespace igprm::simd
{
namespace
{

constexpr std::size_t F = 8;  // floats per __m256

float hsum(__m256 v)
{
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(lo);
  __m128 sums = _mm_add_ps(lo, shuf);
  shuf = _mm_movehl_ps(shuf, sums);
  sums = _mm_add_ss(sums, shuf);
  return _mm_cvtss_f32(sums);
}

void axpy(float a, const float * x, float * y, std::size_t n)
{
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + F <= n; i += F) {
    __m256 vy = _mm256_loadu_ps(y + i);
    vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy);
    _mm256_storeu_ps(y + i, vy);
  }
  for (; i < n; ++i) {
    y[i] += a * x[i];
  }
}

float dot(const float * a, const float * b, std::size_t n)
{
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 2 * F <= n; i += 2 * F) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + F), _mm256_loadu_ps(b + i + F), acc1);
  }
  for (; i + F <= n; i += F) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  }
  float acc = hsum(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

void relu(float * x, std::size_t n)
{
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + F <= n; i += F) {
    _mm256_storeu_ps(x + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
  }
  for (; i < n; ++i) {
    x[i] = std::max(x[i], 0.0f);
  }
}

void conv3x3_accum(
  const float * in, std::size_t in_stride, const float * w,
  float * out, std::size_t width, std::size_t height)
{
  __m256 wv[9];
  for (int t = 0; t < 9; ++t) {
    wv[t] = _mm256_set1_ps(w[t]);
  }
  for (std::size_t y = 0; y < height; ++y) {
    float * orow = out + y * width;
    const float * r0 = in + y * in_stride;
    const float * r1 = r0 + in_stride;
    const float * r2 = r1 + in_stride;
    std::size_t x = 0;
    for (; x + F <= width; x += F) {
      __m256 acc = _mm256_loadu_ps(orow + x);
      acc = _mm256_fmadd_ps(wv[0], _mm256_loadu_ps(r0 + x), acc);
      acc = _mm256_fmadd_ps(wv[1], _mm256_loadu_ps(r0 + x + 1), acc);
      acc = _mm256_fmadd_ps(wv[2], _mm256_loadu_ps(r0 + x + 2), acc);
      acc = _mm256_fmadd_ps(wv[3], _mm256_loadu_ps(r1 + x), acc);
      acc = _mm256_fmadd_ps(wv[4], _mm256_loadu_ps(r1 + x + 1), acc);
      acc = _mm256_fmadd_ps(wv[5], _mm256_loadu_ps(r1 + x + 2), acc);
      acc = _mm256_fmadd_ps(wv[6], _mm256_loadu_ps(r2 + x), acc);
      acc = _mm256_fmadd_ps(wv[7], _mm256_loadu_ps(r2 + x + 1), acc);
      acc = _mm256_fmadd_ps(wv[8], _mm256_loadu_ps(r2 + x + 2), acc);
      _mm256_storeu_ps(orow + x, acc);
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
  const __m256d vx = _mm256_set1_pd(px);
  const __m256d vy = _mm256_set1_pd(py);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vy);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
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

const Kernels * avx2_kernels_table()
{
  static const Kernels table{
    Isa::Avx2, &axpy, &dot, &relu, &conv3x3_accum, &sq_dist,
  };
  return &table;
}

}  // namespace igprm::simd
