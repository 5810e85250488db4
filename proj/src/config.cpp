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

#include "igprm/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "igprm/error.hpp"

namespace igprm
{

using nlohmann::json;

namespace
{

void check_keys(const json & j, std::string_view section, std::initializer_list<std::string_view> allowed)
{
  if (!j.is_object()) {
    throw Error(Errc::InvalidArgument, "config section '" + std::string(section) + "' must be an object");
  }
  for (const auto & [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) {
      ok = ok || key == a;
    }
    if (!ok) {
      throw Error(Errc::InvalidArgument, "unknown config key '" + std::string(section) + "." + key + "'");
    }
  }
}

json range_json(const IntRange & r)
{
  return json::array({r.min, r.max});
}

IntRange range_from(const json & j, IntRange base)
{
  if (!j.is_array() || j.size() != 2) {
    throw Error(Errc::InvalidArgument, "range must be a [min, max] pair");
  }
  base.min = j[0].get<int>();
  base.max = j[1].get<int>();
  return base;
}

template<typename T>
void read(const json & j, const char * key, T & out)
{
  if (j.contains(key)) {
    out = j.at(key).get<T>();
  }
}

void positive(int v, const char * what)
{
  if (v < 1) {
    throw Error(Errc::InvalidArgument, std::string(what) + " must be >= 1");
  }
}

}  // namespace

void AppConfig::validate() const
{
  planner.validate();
  synth.validate();
  positive(indoor.step_size, "indoor.step_size");
  if (indoor.step_count < 0) {
    throw Error(Errc::InvalidArgument, "indoor.step_count must be >= 0");
  }
  if (indoor.min_endpoint_distance < 0.0) {
    throw Error(Errc::InvalidArgument, "indoor.min_endpoint_distance must be >= 0");
  }
  positive(dataset.counts.train, "dataset.counts.train");
  positive(dataset.counts.val, "dataset.counts.val");
  positive(dataset.counts.test, "dataset.counts.test");
  if (dataset.k < 1 || dataset.k > 1536) {
    throw Error(Errc::InvalidDim, "dataset.k must lie in [1, 1536]");
  }
  positive(dataset.unknown_every, "dataset.unknown_every");
  positive(dataset.gt_nodes, "dataset.gt_nodes");
  positive(embedding.max_retries, "embedding.max_retries");
  if (bench.node_counts.empty() || bench.methods.empty()) {
    throw Error(Errc::InvalidArgument, "bench grid must not be empty");
  }
  for (int n : bench.node_counts) {
    positive(n, "bench.node_counts");
  }
  if (ablation.dims.empty()) {
    throw Error(Errc::InvalidArgument, "ablation.dims must not be empty");
  }
  positive(ablation.n_nodes, "ablation.n_nodes");
  positive(runtime.n_nodes, "runtime.n_nodes");
  positive(runtime.repeats, "runtime.repeats");
}

AppConfig config_from_json(const json & j, AppConfig c)
{
  try {
    check_keys(j, "", {"seed", "planner", "synth", "indoor", "dataset", "embedding", "bench", "ablation", "runtime"});
    read(j, "seed", c.seed);
    if (j.contains("planner")) {
      const auto & s = j["planner"];
      check_keys(s, "planner", {"n_nodes", "epsilon", "uniform_mix", "k_neighbors", "sample_interval", "length_weight", "seed"});
      c.planner = planner_params_from_json(s, c.planner);
    }
    if (j.contains("synth")) {
      const auto & s = j["synth"];
      check_keys(s, "synth", {"width", "height", "wall_count_range", "wall_thickness", "narrow_width_range",
          "wide_width_range", "corner_margin", "min_wall_gap"});
      read(s, "width", c.synth.width);
      read(s, "height", c.synth.height);
      read(s, "wall_thickness", c.synth.wall_thickness);
      read(s, "corner_margin", c.synth.corner_margin);
      read(s, "min_wall_gap", c.synth.min_wall_gap);
      if (s.contains("wall_count_range")) {
        c.synth.wall_count_range = range_from(s["wall_count_range"], c.synth.wall_count_range);
      }
      if (s.contains("narrow_width_range")) {
        c.synth.narrow_width_range = range_from(s["narrow_width_range"], c.synth.narrow_width_range);
      }
      if (s.contains("wide_width_range")) {
        c.synth.wide_width_range = range_from(s["wide_width_range"], c.synth.wide_width_range);
      }
    }
    if (j.contains("indoor")) {
      const auto & s = j["indoor"];
      check_keys(s, "indoor", {"step_count", "step_size", "min_endpoint_distance"});
      read(s, "step_count", c.indoor.step_count);
      read(s, "step_size", c.indoor.step_size);
      read(s, "min_endpoint_distance", c.indoor.min_endpoint_distance);
    }
    if (j.contains("dataset")) {
      const auto & s = j["dataset"];
      check_keys(s, "dataset", {"counts", "projection_seed", "k", "instruction_count", "unknown_every", "gt_nodes", "threads"});
      if (s.contains("counts")) {
        const auto & cn = s["counts"];
        check_keys(cn, "dataset.counts", {"train", "val", "test"});
        read(cn, "train", c.dataset.counts.train);
        read(cn, "val", c.dataset.counts.val);
        read(cn, "test", c.dataset.counts.test);
      }
      read(s, "projection_seed", c.dataset.projection_seed);
      read(s, "k", c.dataset.k);
      read(s, "instruction_count", c.dataset.instruction_count);
      read(s, "unknown_every", c.dataset.unknown_every);
      read(s, "gt_nodes", c.dataset.gt_nodes);
      read(s, "threads", c.dataset.threads);
    }
    if (j.contains("embedding")) {
      const auto & s = j["embedding"];
      check_keys(s, "embedding", {"model", "max_retries", "initial_backoff_ms", "timeout_s"});
      read(s, "model", c.embedding.model);
      read(s, "max_retries", c.embedding.max_retries);
      read(s, "initial_backoff_ms", c.embedding.initial_backoff_ms);
      read(s, "timeout_s", c.embedding.timeout_s);
    }
    if (j.contains("bench")) {
      const auto & s = j["bench"];
      check_keys(s, "bench", {"methods", "node_counts", "trials_per_instance", "threads"});
      if (s.contains("methods")) {
        c.bench.methods.clear();
        for (const auto & m : s["methods"]) {
          auto parsed = bench::parse_method(m.get<std::string>());
          if (!parsed) {
            throw Error(Errc::InvalidArgument, "unknown method '" + m.get<std::string>() + "'");
          }
          c.bench.methods.push_back(*parsed);
        }
      }
      read(s, "node_counts", c.bench.node_counts);
      read(s, "trials_per_instance", c.bench.trials_per_instance);
      read(s, "threads", c.bench.threads);
    }
    if (j.contains("ablation")) {
      const auto & s = j["ablation"];
      check_keys(s, "ablation", {"dims", "n_nodes", "trials_per_instance"});
      read(s, "dims", c.ablation.dims);
      read(s, "n_nodes", c.ablation.n_nodes);
      read(s, "trials_per_instance", c.ablation.trials_per_instance);
    }
    if (j.contains("runtime")) {
      const auto & s = j["runtime"];
      check_keys(s, "runtime", {"n_nodes", "repeats"});
      read(s, "n_nodes", c.runtime.n_nodes);
      read(s, "repeats", c.runtime.repeats);
    }
  } catch (const json::exception & e) {
    throw Error(Errc::InvalidArgument, std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const AppConfig & c)
{
  json methods = json::array();
  for (auto m : c.bench.methods) {
    methods.push_back(std::string(bench::to_string(m)));
  }
  return {
    {"seed", c.seed},
    {"planner", to_json(c.planner)},
    {"synth", {
        {"width", c.synth.width}, {"height", c.synth.height},
        {"wall_count_range", range_json(c.synth.wall_count_range)},
        {"wall_thickness", c.synth.wall_thickness},
        {"narrow_width_range", range_json(c.synth.narrow_width_range)},
        {"wide_width_range", range_json(c.synth.wide_width_range)},
        {"corner_margin", c.synth.corner_margin}, {"min_wall_gap", c.synth.min_wall_gap}}},
    {"indoor", {
        {"step_count", c.indoor.step_count}, {"step_size", c.indoor.step_size},
        {"min_endpoint_distance", c.indoor.min_endpoint_distance}}},
    {"dataset", {
        {"counts", {{"train", c.dataset.counts.train}, {"val", c.dataset.counts.val}, {"test", c.dataset.counts.test}}},
        {"projection_seed", c.dataset.projection_seed}, {"k", c.dataset.k},
        {"instruction_count", c.dataset.instruction_count}, {"unknown_every", c.dataset.unknown_every},
        {"gt_nodes", c.dataset.gt_nodes}, {"threads", c.dataset.threads}}},
    {"embedding", {
        {"model", c.embedding.model}, {"max_retries", c.embedding.max_retries},
        {"initial_backoff_ms", c.embedding.initial_backoff_ms}, {"timeout_s", c.embedding.timeout_s}}},
    {"bench", {
        {"methods", methods}, {"node_counts", c.bench.node_counts},
        {"trials_per_instance", c.bench.trials_per_instance}, {"threads", c.bench.threads}}},
    {"ablation", {
        {"dims", c.ablation.dims}, {"n_nodes", c.ablation.n_nodes},
        {"trials_per_instance", c.ablation.trials_per_instance}}},
    {"runtime", {{"n_nodes", c.runtime.n_nodes}, {"repeats", c.runtime.repeats}}},
  };
}

AppConfig load_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoError, "cannot read config " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception & e) {
    throw Error(Errc::InvalidArgument, "config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

}  // namespace igprm
