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

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <utility>
#include <vector>

#include "igprm/envgen.hpp"
#include "igprm/geometry.hpp"

namespace igprm
{

struct PlannerParams
{
  int n_nodes = 150;
  /// Inverse-cost floor: acceptance probability is epsilon / (epsilon + cost).
  double epsilon = 0.1;
  /// Fraction of nodes drawn uniformly regardless of cost.
  double uniform_mix = 0.1;
  int k_neighbors = 15;
  /// Spacing of collision / cost samples along an edge, in cells.
  double sample_interval = 0.5;
  /// Per-unit-length cost added to every sample; small so a detour beats
  /// crossing a unit-cost strip.
  double length_weight = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const PlannerParams & p);
PlannerParams planner_params_from_json(const nlohmann::json & j, PlannerParams base = {});

struct RoadmapEdge
{
  int a = 0;
  int b = 0;
  double cost = 0.0;
};

/// Undirected cost-weighted graph over free-space samples. Nodes 0 and 1 are
/// the start and goal it was built for.
class Roadmap
{
public:
  int add_node(Point p);
  void add_edge(int a, int b, double cost);

  std::size_t size() const {return nodes_.size();}
  const std::vector<Point> & nodes() const {return nodes_;}
  const std::vector<RoadmapEdge> & edges() const {return edges_;}
  const std::vector<std::pair<int, double>> & neighbors(int i) const {return adjacency_[i];}

  PlannerParams params;
  /// Set when biased sampling gave up and the remainder was drawn uniformly.
  bool sampling_stalled = false;

private:
  std::vector<Point> nodes_;
  std::vector<RoadmapEdge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

struct PlanPath
{
  std::vector<int> node_ids;
  std::vector<Point> points;
  std::vector<double> edge_costs;
  double total_cost = 0.0;
  double length = 0.0;
};

struct SampleResult
{
  std::vector<Point> nodes;
  bool stalled = false;
};

/// ceil(uniform_mix * n) uniform free-space samples, the rest accepted with
/// probability epsilon / (epsilon + cost) at the sample's cell.
SampleResult sample_nodes(const CostMap & cost, const EnvironmentMap & env, const PlannerParams & params);

/// Acceptance probability used by the biased sampler.
double acceptance_probability(double cost, double epsilon);

/// Integrated edge cost, or nullopt when a sample lands in a WALL cell.
/// m = max(2, ceil(|ab| / interval) + 1) endpoint-inclusive samples, cost =
/// sum_i (length_weight + cost(p_i)) * |ab| / m. Symmetric in (a, b).
/// Throws DegenerateEdge for a == b.
std::optional<double> edge_cost(
  Point a, Point b, const EnvironmentMap & env, const CostMap & cost, const PlannerParams & params);

/// Endpoint-inclusive sample points of segment ab, ordered from the
/// lexicographically smaller endpoint.
std::vector<Point> segment_samples(Point a, Point b, double interval);

Roadmap build_roadmap(
  const EnvironmentMap & env, const CostMap & cost, Point start, Point goal,
  const PlannerParams & params);

/// Dijkstra with a binary heap; equal distances pop in node-index order.
std::optional<PlanPath> shortest_path(const Roadmap & rm, int start_idx, int goal_idx);

std::optional<PlanPath> plan(
  const EnvironmentMap & env, const CostMap & cost, Point start, Point goal,
  const PlannerParams & params);

/// Answers a new start/goal query on an existing roadmap: both points are
/// linked to their k nearest roadmap nodes, nothing is resampled. `rm` is not
/// modified.
std::optional<PlanPath> query(
  const Roadmap & rm, const EnvironmentMap & env, const CostMap & cost, Point start, Point goal);

/// Cost map of zeros; planning with it is the uniform-PRM baseline.
CostMap zero_cost_like(const EnvironmentMap & env);

nlohmann::json to_json(const Roadmap & rm);

}  // namespace igprm
