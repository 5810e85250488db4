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

#include <optional>
#include <span>
#include <vector>

#include "igprm/envgen.hpp"
#include "igprm/geometry.hpp"
#include "igprm/planner.hpp"

namespace igprm::metrics
{

struct EvalResult
{
  bool success = false;
  double produced_length = 0.0;
  double gt_length = 0.0;
  double spl_term = 0.0;
  /// NaN when no path was produced.
  double dtw = 0.0;
  /// Sum of ground-truth cost over the path's interval samples.
  double hidden_cost = 0.0;
  /// Sum of ground-truth cost over the path's vertices only.
  double node_hidden_cost = 0.0;
};

/// Samples every segment at `interval`; true iff a path exists and no sample
/// falls in a cell with ground-truth cost >= threshold.
bool check_success(
  const std::optional<std::vector<Point>> & path, const CostMap & gt,
  double threshold = 0.5, double interval = 0.5);

double hidden_cost(const std::vector<Point> & path, const CostMap & gt, double interval = 0.5);

double polyline_length(std::span<const Point> path);

struct SplEpisode
{
  bool success = false;
  double gt_length = 0.0;
  double produced_length = 0.0;
};

/// S * l / max(p, l) for one episode.
double spl_term(const SplEpisode & e);

/// Mean SPL term. Throws EmptyResultSet.
double spl(std::span<const SplEpisode> episodes);

/// Classic DTW with Euclidean point distance. Throws EmptySequence.
double dtw(std::span<const Point> a, std::span<const Point> b);

/// `count` points at equal arclength spacing, endpoints included.
/// Throws DegeneratePath for fewer than two points or zero length.
std::vector<Point> resample_path(std::span<const Point> path, int count = 64);

inline constexpr int kDtwResample = 64;

/// Full evaluation of one produced path against the stored ground truth.
EvalResult evaluate(
  const std::optional<std::vector<Point>> & produced, const std::vector<Point> & gt_path,
  const CostMap & gt_cost);

}  // namespace igprm::metrics
