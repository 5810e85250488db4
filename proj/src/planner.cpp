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

#include "igprm/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>

#include "igprm/error.hpp"
#include "igprm/simd/kernels.hpp"

namespace igprm
{

using json = nlohmann::json;

void PlannerParams::validate() const
{
  if (n_nodes < 0) {
    throw Error(Errc::InvalidArgument, "n_nodes must be >= 0");
  }
  if (!(epsilon > 0.0)) {
    throw Error(Errc::InvalidArgument, "epsilon must be > 0");
  }
  if (!(uniform_mix >= 0.0 && uniform_mix <= 1.0)) {
    throw Error(Errc::InvalidArgument, "uniform_mix must lie in [0, 1]");
  }
  if (!(sample_interval > 0.0)) {
    throw Error(Errc::InvalidArgument, "sample_interval must be > 0");
  }
  if (k_neighbors < 1) {
    throw Error(Errc::InvalidArgument, "k_neighbors must be >= 1");
  }
  if (!(length_weight > 0.0)) {
    throw Error(Errc::InvalidArgument, "length_weight must be > 0");
  }
}

json to_json(const PlannerParams & p)
{
  return json{
    {"n_nodes", p.n_nodes}, {"epsilon", p.epsilon}, {"uniform_mix", p.uniform_mix},
    {"k_neighbors", p.k_neighbors}, {"sample_interval", p.sample_interval},
    {"length_weight", p.length_weight}, {"seed", p.seed}};
}

PlannerParams planner_params_from_json(const json & j, PlannerParams p)
{
  p.n_nodes = j.value("n_nodes", p.n_nodes);
  p.epsilon = j.value("epsilon", p.epsilon);
  p.uniform_mix = j.value("uniform_mix", p.uniform_mix);
  p.k_neighbors = j.value("k_neighbors", p.k_neighbors);
  p.sample_interval = j.value("sample_interval", p.sample_interval);
  p.length_weight = j.value("length_weight", p.length_weight);
  p.seed = j.value("seed", p.seed);
  p.validate();
  return p;
}

int Roadmap::add_node(Point p)
{
  nodes_.push_back(p);
  adjacency_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

void Roadmap::add_edge(int a, int b, double cost)
{
  edges_.push_back({a, b, cost});
  adjacency_[a].emplace_back(b, cost);
  adjacency_[b].emplace_back(a, cost);
}

double acceptance_probability(double cost, double epsilon)
{
  return epsilon / (epsilon + cost);
}

SampleResult sample_nodes(const CostMap & cost, const EnvironmentMap & env, const PlannerParams & params)
{
  params.validate();
  if (cost.width() != env.width() || cost.height() != env.height()) {
    throw Error(Errc::DimensionMismatch, "cost map and environment differ in size");
  }
  if (env.count(CellClass::Wall) == env.cells().size()) {
    throw Error(Errc::InvalidArgument, "environment has no free space to sample");
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> ux(0.0, env.width());
  std::uniform_real_distribution<double> uy(0.0, env.height());
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  auto draw_free = [&]() {
      for (;;) {
        const Point p{ux(rng), uy(rng)};
        // guard against the half-open upper bound rounding up
        if (p.x >= env.width() || p.y >= env.height()) {
          continue;
        }
        if (!env.is_wall(p)) {
          return p;
        }
      }
    };

  SampleResult out;
  const int n = params.n_nodes;
  const int n_uniform = std::min(n, static_cast<int>(std::ceil(params.uniform_mix * n - 1e-12)));
  out.nodes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n_uniform; ++i) {
    out.nodes.push_back(draw_free());
  }

  const long max_rejections = 1000L * n;
  long rejections = 0;
  while (static_cast<int>(out.nodes.size()) < n) {
    if (rejections > max_rejections) {
      out.stalled = true;
      out.nodes.push_back(draw_free());
      continue;
    }
    const Point p{ux(rng), uy(rng)};
    if (p.x >= env.width() || p.y >= env.height() || env.is_wall(p)) {
      ++rejections;
      continue;
    }
    if (u01(rng) < acceptance_probability(cost.at(p), params.epsilon)) {
      out.nodes.push_back(p);
    } else {
      ++rejections;
    }
  }
  return out;
}

std::vector<Point> segment_samples(Point a, Point b, double interval)
{
  if (std::tie(b.x, b.y) < std::tie(a.x, a.y)) {
    std::swap(a, b);
  }
  const double len = distance(a, b);
  const int m = std::max(2, static_cast<int>(std::ceil(len / interval)) + 1);
  std::vector<Point> pts(static_cast<std::size_t>(m));
  for (int i = 0; i < m - 1; ++i) {
    const double t = static_cast<double>(i) / (m - 1);
    pts[i] = {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
  }
  pts[m - 1] = b;
  return pts;
}

std::optional<double> edge_cost(
  Point a, Point b, const EnvironmentMap & env, const CostMap & cost, const PlannerParams & params)
{
  if (a == b) {
    throw Error(Errc::DegenerateEdge, "edge endpoints coincide");
  }
  const auto pts = segment_samples(a, b, params.sample_interval);
  const double step = distance(a, b) / static_cast<double>(pts.size());
  double total = 0.0;
  for (const Point & p : pts) {
    if (env.is_wall(p)) {
      return std::nullopt;
    }
    total += (params.length_weight + cost.at(p)) * step;
  }
  return total;
}

namespace
{

/// Indices of the k nearest nodes to `p` among the first `limit` nodes,
/// skipping `self`; distance ties go to the smaller index.
std::vector<int> nearest(
  const std::vector<double> & xs, const std::vector<double> & ys, std::size_t limit,
  Point p, int self, int k, std::vector<double> & scratch)
{
  scratch.resize(limit);
  simd::kernels().sq_dist_f64(p.x, p.y, xs.data(), ys.data(), scratch.data(), limit);
  std::vector<int> idx;
  idx.reserve(limit);
  for (std::size_t i = 0; i < limit; ++i) {
    if (static_cast<int>(i) != self) {
      idx.push_back(static_cast<int>(i));
    }
  }
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), idx.size());
  auto closer = [&](int i, int j) {
      return scratch[i] < scratch[j] || (scratch[i] == scratch[j] && i < j);
    };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(), closer);
  idx.resize(take);
  return idx;
}

void connect_node(
  Roadmap & rm, int i, const std::vector<int> & candidates, const EnvironmentMap & env,
  const CostMap & cost, std::set<std::pair<int, int>> & tried)
{
  for (int j : candidates) {
    const auto key = std::minmax(i, j);
    if (!tried.insert(key).second) {
      continue;
    }
    const Point a = rm.nodes()[key.first];
    const Point b = rm.nodes()[key.second];
    if (a == b) {
      continue;
    }
    if (auto c = edge_cost(a, b, env, cost, rm.params)) {
      rm.add_edge(key.first, key.second, *c);
    }
  }
}

void check_endpoint(const EnvironmentMap & env, Point p, const char * what)
{
  if (!(p.x >= 0.0 && p.y >= 0.0 && p.x < env.width() && p.y < env.height())) {
    throw Error(Errc::InvalidArgument, std::string(what) + " lies outside the map");
  }
  if (env.is_wall(p)) {
    throw Error(Errc::InvalidArgument, std::string(what) + " lies in a wall cell");
  }
}

}  // namespace

Roadmap build_roadmap(
  const EnvironmentMap & env, const CostMap & cost, Point start, Point goal,
  const PlannerParams & params)
{
  check_endpoint(env, start, "start");
  check_endpoint(env, goal, "goal");
  Roadmap rm;
  rm.params = params;
  rm.add_node(start);
  rm.add_node(goal);
  SampleResult samples = sample_nodes(cost, env, params);
  rm.sampling_stalled = samples.stalled;
  for (const Point & p : samples.nodes) {
    rm.add_node(p);
  }

  std::vector<double> xs, ys, scratch;
  for (const Point & p : rm.nodes()) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::set<std::pair<int, int>> tried;
  for (int i = 0; i < static_cast<int>(rm.size()); ++i) {
    const auto cand = nearest(xs, ys, rm.size(), rm.nodes()[i], i, params.k_neighbors, scratch);
    connect_node(rm, i, cand, env, cost, tried);
  }
  return rm;
}

std::optional<PlanPath> shortest_path(const Roadmap & rm, int start_idx, int goal_idx)
{
  const int n = static_cast<int>(rm.size());
  if (start_idx < 0 || start_idx >= n || goal_idx < 0 || goal_idx >= n) {
    throw Error(Errc::InvalidArgument, "node index out of range");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(n), inf);
  std::vector<int> prev(static_cast<std::size_t>(n), -1);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[start_idx] = 0.0;
  heap.push({0.0, start_idx});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) {
      continue;
    }
    done[u] = 1;
    if (u == goal_idx) {
      break;
    }
    for (const auto & [v, w] : rm.neighbors(u)) {
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        prev[v] = u;
        heap.push({nd, v});
      }
    }
  }
  if (!done[goal_idx]) {
    return std::nullopt;
  }

  PlanPath path;
  for (int v = goal_idx; v != -1; v = prev[v]) {
    path.node_ids.push_back(v);
  }
  std::reverse(path.node_ids.begin(), path.node_ids.end());
  for (std::size_t i = 0; i < path.node_ids.size(); ++i) {
    path.points.push_back(rm.nodes()[path.node_ids[i]]);
    if (i > 0) {
      const int a = path.node_ids[i - 1];
      const int b = path.node_ids[i];
      double w = inf;
      for (const auto & [v, c] : rm.neighbors(a)) {
        if (v == b) {
          w = std::min(w, c);
        }
      }
      path.edge_costs.push_back(w);
      path.length += distance(path.points[i - 1], path.points[i]);
    }
  }
  path.total_cost = dist[goal_idx];
  return path;
}

std::optional<PlanPath> plan(
  const EnvironmentMap & env, const CostMap & cost, Point start, Point goal,
  const PlannerParams & params)
{
  const Roadmap rm = build_roadmap(env, cost, start, goal, params);
  return shortest_path(rm, 0, 1);
}

std::optional<PlanPath> query(
  const Roadmap & rm, const EnvironmentMap & env, const CostMap & cost, Point start, Point goal)
{
  check_endpoint(env, start, "start");
  check_endpoint(env, goal, "goal");
  Roadmap local = rm;
  const std::size_t base = local.size();
  std::vector<double> xs, ys, scratch;
  for (const Point & p : local.nodes()) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const int s = local.add_node(start);
  const int g = local.add_node(goal);
  std::set<std::pair<int, int>> tried;
  for (int q : {s, g}) {
    const auto cand = nearest(xs, ys, base, local.nodes()[q], -1, local.params.k_neighbors, scratch);
    connect_node(local, q, cand, env, cost, tried);
  }
  return shortest_path(local, s, start == goal ? s : g);
}

CostMap zero_cost_like(const EnvironmentMap & env)
{
  return CostMap(env.width(), env.height(), 0.0f);
}

json to_json(const Roadmap & rm)
{
  json nodes = json::array();
  for (const Point & p : rm.nodes()) {
    nodes.push_back({p.x, p.y});
  }
  json edges = json::array();
  for (const auto & e : rm.edges()) {
    edges.push_back({e.a, e.b, e.cost});
  }
  return json{
    {"nodes", nodes}, {"edges", edges}, {"params", to_json(rm.params)},
    {"sampling_stalled", rm.sampling_stalled}};
}

}  // namespace igprm
