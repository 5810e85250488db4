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

#include "igprm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "igprm/error.hpp"
#include "igprm/simd/kernels.hpp"

namespace igprm::metrics
{

bool check_success(
  const std::optional<std::vector<Point>> & path, const CostMap & gt,
  double threshold, double interval)
{
  if (!path || path->empty()) {
    return false;
  }
  const auto & pts = *path;
  if (pts.size() == 1) {
    return gt.at(pts[0]) < threshold;
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i - 1] == pts[i]) {
      if (gt.at(pts[i]) >= threshold) {
        return false;
      }
      continue;
    }
    for (const Point & p : segment_samples(pts[i - 1], pts[i], interval)) {
      if (gt.at(p) >= threshold) {
        return false;
      }
    }
  }
  return true;
}

double hidden_cost(const std::vector<Point> & path, const CostMap & gt, double interval)
{
  double total = 0.0;
  if (path.size() == 1) {
    return gt.at(path[0]);
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i - 1] == path[i]) {
      continue;
    }
    for (const Point & p : segment_samples(path[i - 1], path[i], interval)) {
      total += gt.at(p);
    }
  }
  return total;
}

double polyline_length(std::span<const Point> path)
{
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    len += distance(path[i - 1], path[i]);
  }
  return len;
}

double spl_term(const SplEpisode & e)
{
  if (!e.success) {
    return 0.0;
  }
  if (!(e.gt_length > 0.0)) {
    throw Error(Errc::InvalidArgument, "successful episode needs a positive ground-truth length");
  }
  return e.gt_length / std::max(e.produced_length, e.gt_length);
}

double spl(std::span<const SplEpisode> episodes)
{
  if (episodes.empty()) {
    throw Error(Errc::EmptyResultSet, "SPL of zero episodes");
  }
  double sum = 0.0;
  for (const auto & e : episodes) {
    sum += spl_term(e);
  }
  return sum / static_cast<double>(episodes.size());
}

double dtw(std::span<const Point> a, std::span<const Point> b)
{
  if (a.empty() || b.empty()) {
    throw Error(Errc::EmptySequence, "DTW needs two nonempty sequences");
  }
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<double> bx(n), by(n), row_dist(n);
  for (std::size_t j = 0; j < n; ++j) {
    bx[j] = b[j].x;
    by[j] = b[j].y;
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  // rolling rows of D with a leading infinite column
  std::vector<double> prev(n + 1, inf), cur(n + 1, inf);
  prev[0] = 0.0;
  const auto & k = simd::kernels();
  for (std::size_t i = 0; i < m; ++i) {
    k.sq_dist_f64(a[i].x, a[i].y, bx.data(), by.data(), row_dist.data(), n);
    cur[0] = inf;
    for (std::size_t j = 1; j <= n; ++j) {
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::sqrt(row_dist[j - 1]) + best;
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

std::vector<Point> resample_path(std::span<const Point> path, int count)
{
  if (count < 2) {
    throw Error(Errc::InvalidArgument, "resample count must be >= 2");
  }
  if (path.size() < 2) {
    throw Error(Errc::DegeneratePath, "need at least two points to resample");
  }
  std::vector<double> cum(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    cum[i] = cum[i - 1] + distance(path[i - 1], path[i]);
  }
  const double total = cum.back();
  if (!(total > 0.0)) {
    throw Error(Errc::DegeneratePath, "path has zero length");
  }
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  out.push_back(path.front());
  std::size_t seg = 1;
  for (int i = 1; i < count - 1; ++i) {
    const double s = total * i / (count - 1);
    while (seg < path.size() - 1 && cum[seg] < s) {
      ++seg;
    }
    const double seg_len = cum[seg] - cum[seg - 1];
    const double t = seg_len > 0.0 ? (s - cum[seg - 1]) / seg_len : 0.0;
    const Point & p0 = path[seg - 1];
    const Point & p1 = path[seg];
    out.push_back({p0.x + (p1.x - p0.x) * t, p0.y + (p1.y - p0.y) * t});
  }
  out.push_back(path.back());
  return out;
}

EvalResult evaluate(
  const std::optional<std::vector<Point>> & produced, const std::vector<Point> & gt_path,
  const CostMap & gt_cost)
{
  EvalResult r;
  r.gt_length = polyline_length(gt_path);
  r.success = check_success(produced, gt_cost);
  if (!produced || produced->empty()) {
    r.dtw = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const auto & path = *produced;
  r.produced_length = polyline_length(path);
  r.hidden_cost = hidden_cost(path, gt_cost);
  for (const Point & p : path) {
    r.node_hidden_cost += gt_cost.at(p);
  }
  r.spl_term = spl_term({r.success, r.gt_length, r.produced_length});
  if (r.produced_length > 0.0 && r.gt_length > 0.0) {
    const auto a = resample_path(path, kDtwResample);
    const auto b = resample_path(gt_path, kDtwResample);
    r.dtw = dtw(a, b);
  } else {
    r.dtw = dtw(path, gt_path);
  }
  return r;
}

}  // namespace igprm::metrics
