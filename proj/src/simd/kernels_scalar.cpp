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

#include <algorithm>

namespace igprm::simd
{
namespace
{

void axpy(float a, const float * x, float * y, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += a * x[i];
  }
}

float dot(const float * a, const float * b, std::size_t n)
{
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

void relu(float * x, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::max(x[i], 0.0f);
  }
}

void conv3x3_accum(
  const float * in, std::size_t in_stride, const float * w,
  float * out, std::size_t width, std::size_t height)
{
  for (std::size_t y = 0; y < height; ++y) {
    float * orow = out + y * width;
    for (std::size_t dy = 0; dy < 3; ++dy) {
      const float * irow = in + (y + dy) * in_stride;
      const float w0 = w[dy * 3 + 0];
      const float w1 = w[dy * 3 + 1];
      const float w2 = w[dy * 3 + 2];
      for (std::size_t x = 0; x < width; ++x) {
        orow[x] += w0 * irow[x] + w1 * irow[x + 1] + w2 * irow[x + 2];
      }
    }
  }
}

void sq_dist(
  double px, double py, const double * xs, const double * ys,
  double * out, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double dx2 = dx * dx;
    const double dy2 = dy * dy;
    out[i] = dx2 + dy2;
  }
}

}  // namespace

const Kernels & scalar_kernels()
{
  static const Kernels table{
    Isa::Scalar, &axpy, &dot, &relu, &conv3x3_accum, &sq_dist,
  };
  return table;
}

}  // namespace igprm::simd
