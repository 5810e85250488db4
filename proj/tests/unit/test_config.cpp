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

#include <doctest.h>

#include <fstream>
#include <functional>

#include "igprm/config.hpp"
#include "igprm/error.hpp"
#include "test_util.hpp"

using namespace igprm;
using nlohmann::json;

namespace
{

Errc code_of(const std::function<void()> & f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.code();
  }
  FAIL("expected an igprm::Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("defaults survive a JSON round trip") {
  const AppConfig def;
  const json j = to_json(def);
  const auto back = config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(j.at("planner").at("n_nodes") == 150);
  CHECK(j.at("dataset").at("counts").at("train") == 800);
  CHECK(j.at("bench").at("node_counts") == json::array({50, 150, 300}));
  CHECK(j.at("ablation").at("dims") == json::array({8, 16, 32, 64, 128}));
  CHECK(j.at("runtime").at("repeats") == 100);
}

TEST_CASE("partial configs override only what they name") {
  const auto c = config_from_json(json::parse(R"({
    "seed": 42,
    "planner": {"n_nodes": 300, "epsilon": 0.2},
    "synth": {"wall_count_range": [2, 3]},
    "dataset": {"counts": {"train": 10}, "k": 8},
    "bench": {"methods": ["prm_baseline"], "node_counts": [50]}
  })"));
  CHECK(c.seed == 42);
  CHECK(c.planner.n_nodes == 300);
  CHECK(c.planner.epsilon == 0.2);
  CHECK(c.planner.k_neighbors == PlannerParams{}.k_neighbors);
  CHECK(c.synth.wall_count_range.min == 2);
  CHECK(c.synth.wall_count_range.max == 3);
  CHECK(c.dataset.counts.train == 10);
  CHECK(c.dataset.counts.val == 100);
  CHECK(c.dataset.k == 8);
  CHECK(c.bench.methods == std::vector<bench::Method>{bench::Method::PrmBaseline});
  CHECK(c.bench.node_counts == std::vector<int>{50});
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK(code_of([] {config_from_json(json::parse(R"({"sed": 1})"));}) == Errc::InvalidArgument);
  CHECK(code_of([] {config_from_json(json::parse(R"({"planner": {"nodes": 1}})"));}) == Errc::InvalidArgument);
  CHECK(code_of([] {config_from_json(json::parse(R"({"planner": {"n_nodes": "many"}})"));}) == Errc::InvalidArgument);
  CHECK(code_of([] {config_from_json(json::parse(R"({"planner": {"epsilon": -1}})"));}) == Errc::InvalidArgument);
  CHECK(code_of([] {config_from_json(json::parse(R"({"bench": {"methods": ["astar"]}})"));}) == Errc::InvalidArgument);
  CHECK(code_of([] {config_from_json(json::parse(R"({"synth": {"wall_count_range": [1]}})"));}) == Errc::InvalidArgument);
  CHECK(code_of([] {config_from_json(json::parse(R"({"dataset": {"k": 0}})"));}) == Errc::InvalidDim);
  CHECK(code_of([] {config_from_json(json::parse(R"([1, 2])"));}) == Errc::InvalidArgument);
}

TEST_CASE("config files") {
  test::TempDir tmp;
  std::ofstream(tmp / "ok.json") << R"({"seed": 7})";
  CHECK(load_config(tmp / "ok.json").seed == 7);
  std::ofstream(tmp / "bad.json") << "{seed:";
  CHECK(code_of([&] {load_config(tmp / "bad.json");}) == Errc::InvalidArgument);
  CHECK(code_of([&] {load_config(tmp / "none.json");}) == Errc::IoError);
}
