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
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "igprm/costnet.hpp"
#include "igprm/dataset.hpp"
#include "igprm/metrics.hpp"
#include "igprm/planner.hpp"

namespace igprm::bench
{

enum class Method
{
  IgprmLearned,
  IgprmOracle,
  PrmBaseline,
};

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

struct Row
{
  int instance_id = 0;
  Method method = Method::PrmBaseline;
  int n_nodes = 0;
  int trial = 0;
  SplitTag split = SplitTag::TestKnown;
  InstructionClass cls = InstructionClass::Shortest;
  /// Embedding width of the model that produced the costs (ablation rows).
  int dim = 0;
  metrics::EvalResult eval;
  double wall_clock_ms = 0.0;
};

struct Aggregate
{
  std::string method;
  int n_nodes = 0;
  int dim = 0;
  std::string split;
  int count = 0;
  double success_rate = 0.0;
  double mean_spl = 0.0;
  /// Mean over rows that produced a path.
  double mean_dtw = 0.0;
  int dtw_count = 0;
};

using InstanceFilter = std::function<bool(const dataset::ProblemInstance &, const InstructionRecord &)>;

struct BenchConfig
{
  std::vector<Method> methods{Method::IgprmOracle, Method::PrmBaseline};
  std::vector<int> node_counts{50, 150, 300};
  int trials_per_instance = 1;
  std::uint64_t seed = 0;
  PlannerParams planner;
  /// Required by IgprmLearned.
  const costnet::Model * model = nullptr;
  std::vector<SplitTag> splits{SplitTag::TestKnown, SplitTag::TestUnknown};
  InstanceFilter filter;
  int threads = 0;
};

struct Report
{
  std::vector<Row> rows;
  std::vector<Aggregate> aggregates;
};

/// Plans and evaluates every (instance x method x node count x trial) and
/// aggregates per (method, node count, split). Throws MissingWeights,
/// EmptyReport.
Report run_benchmark(const dataset::Dataset & ds, const BenchConfig & cfg);

/// Planner seed shared by all methods for one (instance, trial, node count).
std::uint64_t trial_seed(std::uint64_t seed, int instance_id, int trial, int n_nodes);

/// Instruction embedding projected to the model's width with the dataset's
/// projection seed.
std::vector<float> model_embedding(const dataset::Dataset & ds, const InstructionRecord & instr, int k);

/// Groups rows by (method, n_nodes, dim, split) in first-seen order of the
/// sorted rows.
std::vector<Aggregate> aggregate(const std::vector<Row> & rows);

struct AblationConfig
{
  std::vector<int> dims{8, 16, 32, 64, 128};
  /// One model per dimension; ignored under oracle substitution.
  std::map<int, const costnet::Model *> models;
  bool oracle_substitution = false;
  int n_nodes = 150;
  int trials_per_instance = 1;
  std::uint64_t seed = 0;
  PlannerParams planner;
  InstanceFilter filter;
  int threads = 0;
};

/// Aggregates per (dim, split) over test_known and test_unknown.
Report run_ablation(const dataset::Dataset & ds, const AblationConfig & cfg);

struct RuntimeStats
{
  double predict_ms = 0.0;
  double plan_ms = 0.0;
  int repeats = 0;
  int n_nodes = 0;
};

/// Mean wall-clock of cost prediction and of planning, timed separately.
RuntimeStats measure_runtime(
  const dataset::ProblemInstance & inst, std::span<const float> embedding,
  const costnet::Model & model, PlannerParams planner, int n_nodes = 300, int repeats = 100);

void write_rows_csv(std::ostream & out, const std::vector<Row> & rows);
void write_aggregates_csv(std::ostream & out, const std::vector<Aggregate> & aggs);

/// Parses the per-row CSV written by write_rows_csv (used for self-checks).
std::vector<Row> read_rows_csv(std::istream & in);

}  // namespace igprm::bench
