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
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <vector>

#include "igprm/embedding_client.hpp"
#include "igprm/envgen.hpp"
#include "igprm/instructions.hpp"
#include "igprm/planner.hpp"

namespace igprm::dataset
{

struct ProblemInstance
{
  int id = 0;
  EnvironmentMap env;
  int instruction_id = 0;
  Point start;
  Point goal;
  CostMap gt_cost;
  std::vector<Point> gt_path;
  SplitTag split = SplitTag::Train;
};

struct Counts
{
  int train = 800;
  int val = 100;
  int test = 200;

  int total() const {return train + val + test;}
  /// Test instances drawing known sentences; the rest use withheld ones.
  int test_known() const {return (test + 1) / 2;}
};

enum class EmbeddingMode
{
  Offline,
  Endpoint,
};

struct BuildConfig
{
  MapKind kind = MapKind::Synthetic;
  Counts counts;
  std::uint64_t seed = 0;
  std::uint64_t projection_seed = 1234;
  int k = 16;
  /// 0 picks 132 (synthetic) or 90 (indoor).
  int instruction_count = 0;
  /// Every `unknown_every`-th sentence of each class is withheld for test_unknown.
  int unknown_every = 4;
  EmbeddingMode embedding_mode = EmbeddingMode::Offline;
  EndpointConfig endpoint;
  SynthConfig synth;
  /// Planner settings for ground-truth paths; n_nodes is forced to gt_nodes.
  PlannerParams gt_planner;
  int gt_nodes = 400;
  std::vector<std::filesystem::path> indoor_sources;
  int step_count = 20;
  int step_size = 4;
  double indoor_min_endpoint_distance = 24.0;
  /// Worker threads for instance generation; 0 = hardware concurrency.
  int threads = 0;
};

/// Retries with fresh planner seeds (up to 10 retries) until the path avoids
/// every ground-truth cell >= 0.5. Throws OracleFailed.
std::vector<Point> gen_gt_path(
  const EnvironmentMap & env, const CostMap & gt_cost, Point start, Point goal,
  int n_nodes, std::uint64_t seed, PlannerParams base = {});

/// Rounds coordinates to 6 fractional digits so the text form round-trips.
std::vector<Point> quantize(std::vector<Point> path);
double quantize(double v);

/// Generates every instance and writes the dataset directory. meta.json is
/// written last; on failure a FAILED marker is left instead.
void build_dataset(const BuildConfig & cfg, const std::filesystem::path & dir);

struct Dataset
{
  std::filesystem::path dir;
  nlohmann::json meta;
  MapKind kind = MapKind::Synthetic;
  int k = 16;
  std::uint64_t projection_seed = 0;
  std::vector<InstructionRecord> instructions;
  std::vector<ProblemInstance> instances;

  const InstructionRecord & instruction(int id) const;
};

/// Loads and (optionally) re-validates every instance invariant. Throws
/// DatasetInvalid / IoError.
Dataset load_dataset(const std::filesystem::path & dir, bool validate = true);

/// Throws DatasetInvalid describing the first violated invariant.
void validate_instance(const ProblemInstance & inst, const InstructionRecord & instr);

nlohmann::json instance_meta(const ProblemInstance & inst);
void write_instance(const std::filesystem::path & dir, const ProblemInstance & inst);
ProblemInstance read_instance(const std::filesystem::path & dir, MapKind kind);

nlohmann::json passages_to_json(const std::vector<Passage> & ps);

}  // namespace igprm::dataset
