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
#include <string>
#include <vector>

#include "igprm/bench.hpp"
#include "igprm/dataset.hpp"
#include "igprm/envgen.hpp"
#include "igprm/planner.hpp"

namespace igprm
{

/// Every tunable of the CLI in one place. JSON sections mirror the members;
/// unknown keys are rejected.
struct AppConfig
{
  std::uint64_t seed = 0;
  PlannerParams planner;
  SynthConfig synth;

  struct Indoor
  {
    int step_count = 20;
    int step_size = 4;
    double min_endpoint_distance = 24.0;
  } indoor;

  struct Dataset
  {
    dataset::Counts counts;
    std::uint64_t projection_seed = 1234;
    int k = 16;
    int instruction_count = 0;
    int unknown_every = 4;
    int gt_nodes = 400;
    int threads = 0;
  } dataset;

  struct Embedding
  {
    std::string model = "text-embedding-ada-002";
    int max_retries = 3;
    int initial_backoff_ms = 250;
    int timeout_s = 30;
  } embedding;

  struct Bench
  {
    std::vector<bench::Method> methods{bench::Method::IgprmOracle, bench::Method::PrmBaseline};
    std::vector<int> node_counts{50, 150, 300};
    int trials_per_instance = 1;
    int threads = 0;
  } bench;

  struct Ablation
  {
    std::vector<int> dims{8, 16, 32, 64, 128};
    int n_nodes = 150;
    int trials_per_instance = 1;
  } ablation;

  struct Runtime
  {
    int n_nodes = 300;
    int repeats = 100;
  } runtime;

  void validate() const;
};

/// Overlays `j` on `base`. Throws InvalidArgument on unknown keys or bad values.
AppConfig config_from_json(const nlohmann::json & j, AppConfig base = {});
nlohmann::json to_json(const AppConfig & cfg);

/// Throws IoError if the file cannot be read.
AppConfig load_config(const std::filesystem::path & path);

}  // namespace igprm
