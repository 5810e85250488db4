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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>

#include "igprm/dataset.hpp"
#include "igprm/error.hpp"
#include "igprm/metrics.hpp"
#include "igprm/pgm.hpp"
#include "floor_plan.hpp"
#include "test_util.hpp"

using namespace igprm;
using namespace igprm::dataset;
namespace fs = std::filesystem;

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

BuildConfig smoke_config(std::uint64_t seed = 1)
{
  BuildConfig cfg;
  cfg.counts = {2, 1, 2};
  cfg.seed = seed;
  cfg.k = 8;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("counts") {
  Counts c;
  CHECK(c.total() == 1100);
  CHECK(c.test_known() == 100);
  CHECK(c.test - c.test_known() == 100);
  CHECK(Counts{2, 1, 2}.total() == 5);
}

TEST_CASE("quantisation") {
  CHECK(quantize(1.23456789) == 1.234568);
  CHECK(quantize(-0.0000004) == 0.0);
  const auto q = quantize(std::vector<Point>{{1.0000004, 2.9999996}});
  CHECK(q[0] == Point{1.0, 3.0});
}

TEST_CASE("synthetic smoke dataset builds, reloads and validates") {
  test::TempDir tmp;
  const auto dir = tmp / "ds";
  build_dataset(smoke_config(), dir);
  CHECK(fs::exists(dir / "meta.json"));
  CHECK(fs::exists(dir / "instructions.jsonl"));
  CHECK(fs::exists(dir / "embeddings.jsonl"));
  CHECK_FALSE(fs::exists(dir / "FAILED"));
  for (int id = 0; id < 5; ++id) {
    char name[8];
    std::snprintf(name, sizeof(name), "%05d", id);
    const auto inst_dir = dir / "instances" / name;
    CHECK(fs::exists(inst_dir / "map.pgm"));
    CHECK(fs::exists(inst_dir / "cost.pgm"));
    CHECK(fs::exists(inst_dir / "meta.json"));
  }

  const auto ds = load_dataset(dir);
  CHECK(ds.kind == MapKind::Synthetic);
  CHECK(ds.k == 8);
  CHECK(ds.instructions.size() == 132);
  REQUIRE(ds.instances.size() == 5);
  CHECK(ds.meta.at("counts").at("test_known") == 1);
  CHECK(ds.meta.at("counts").at("test_unknown") == 1);

  const std::vector<SplitTag> expected{
    SplitTag::Train, SplitTag::Train, SplitTag::Val, SplitTag::TestKnown, SplitTag::TestUnknown};
  for (const auto & inst : ds.instances) {
    CHECK(inst.split == expected[inst.id]);
    CHECK(inst.gt_path.front() == inst.start);
    CHECK(inst.gt_path.back() == inst.goal);
    CHECK(metrics::check_success(inst.gt_path, inst.gt_cost));
    CHECK(inst.gt_cost == gt_cost_map(inst.env, ds.instruction(inst.instruction_id).cls));
    CHECK_NOTHROW(validate_instance(inst, ds.instruction(inst.instruction_id)));
  }
  for (const auto & r : ds.instructions) {
    CHECK(r.embedding.size() == kEmbeddingDim);
    CHECK(r.projected.size() == 8u);
  }
}

TEST_CASE("builds are deterministic per seed") {
  test::TempDir tmp;
  build_dataset(smoke_config(3), tmp / "a");
  auto cfg = smoke_config(3);
  cfg.threads = 2;
  build_dataset(cfg, tmp / "b");
  build_dataset(smoke_config(4), tmp / "c");
  auto slurp = [](const fs::path & p) {
      std::ifstream in(p, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
  bool any_diff = false;
  for (int id = 0; id < 5; ++id) {
    char name[8];
    std::snprintf(name, sizeof(name), "%05d", id);
    for (const char * f : {"map.pgm", "cost.pgm", "meta.json"}) {
      CHECK(slurp(tmp / "a" / "instances" / name / f) == slurp(tmp / "b" / "instances" / name / f));
      any_diff |= slurp(tmp / "a" / "instances" / name / f) != slurp(tmp / "c" / "instances" / name / f);
    }
  }
  CHECK(slurp(tmp / "a" / "meta.json") == slurp(tmp / "b" / "meta.json"));
  CHECK(any_diff);
}

TEST_CASE("withheld sentences never reach train, val or test_known") {
  test::TempDir tmp;
  auto cfg = smoke_config(9);
  cfg.counts = {30, 5, 20};
  build_dataset(cfg, tmp / "ds");
  const auto ds = load_dataset(tmp / "ds");
  std::set<std::string> seen_known;
  std::set<std::string> seen_unknown;
  for (const auto & inst : ds.instances) {
    const auto & instr = ds.instruction(inst.instruction_id);
    (inst.split == SplitTag::TestUnknown ? seen_unknown : seen_known).insert(instr.text);
  }
  for (const auto & t : seen_unknown) {
    CHECK(seen_known.count(t) == 0);
  }
  CHECK_FALSE(seen_unknown.empty());
  // every 4th sentence of a class is withheld
  std::map<InstructionClass, int> rank;
  for (const auto & r : ds.instructions) {
    const int k = rank[r.cls]++;
    CHECK((r.split_tag == SplitTag::TestUnknown) == (k % 4 == 3));
  }
}

TEST_CASE("reload is lossless") {
  test::TempDir tmp;
  build_dataset(smoke_config(5), tmp / "ds");
  const auto ds = load_dataset(tmp / "ds");
  for (const auto & inst : ds.instances) {
    write_instance(tmp / "copy", inst);
    const auto back = read_instance(tmp / "copy", MapKind::Synthetic);
    CHECK(back.id == inst.id);
    CHECK(back.env == inst.env);
    CHECK(back.gt_cost == inst.gt_cost);
    CHECK(back.gt_path == inst.gt_path);
    CHECK(back.start == inst.start);
    CHECK(back.goal == inst.goal);
    CHECK(back.split == inst.split);
    CHECK(back.instruction_id == inst.instruction_id);
    CHECK(quantize(back.gt_path) == back.gt_path);
  }
}

TEST_CASE("indoor smoke dataset") {
  test::TempDir tmp;
  auto cfg = smoke_config(2);
  cfg.kind = MapKind::Indoor;
  cfg.indoor_sources = {oracle::write_floor_plan(tmp.path())};
  build_dataset(cfg, tmp / "ds");
  const auto ds = load_dataset(tmp / "ds");
  CHECK(ds.kind == MapKind::Indoor);
  CHECK(ds.instructions.size() == 90);
  for (const auto & inst : ds.instances) {
    CHECK(inst.env.width() == 64);
    CHECK(inst.env.count(CellClass::StepLow) + inst.env.count(CellClass::StepHigh) > 0);
    CHECK(distance(inst.start, inst.goal) >= 24.0);
    CHECK(metrics::check_success(inst.gt_path, inst.gt_cost));
    CHECK(kind_of(ds.instruction(inst.instruction_id).cls) == MapKind::Indoor);
  }
}

TEST_CASE("indoor builds need a source map") {
  test::TempDir tmp;
  auto cfg = smoke_config();
  cfg.kind = MapKind::Indoor;
  CHECK(code_of([&] {build_dataset(cfg, tmp / "ds");}) == Errc::InvalidArgument);
  CHECK(fs::exists(tmp / "ds" / "FAILED"));
  CHECK_FALSE(fs::exists(tmp / "ds" / "meta.json"));
  CHECK(code_of([&] {load_dataset(tmp / "ds");}) == Errc::DatasetInvalid);

  cfg.indoor_sources = {tmp / "missing.pgm"};
  CHECK(code_of([&] {build_dataset(cfg, tmp / "ds2");}) == Errc::UnreadableMap);
}

TEST_CASE("bad arguments and existing output") {
  test::TempDir tmp;
  auto cfg = smoke_config();
  cfg.counts = {0, 1, 1};
  CHECK(code_of([&] {build_dataset(cfg, tmp / "x");}) == Errc::InvalidArgument);
  std::ofstream(tmp / "stuff.txt") << "x";
  CHECK(code_of([&] {build_dataset(smoke_config(), tmp.path());}) == Errc::IoError);
  CHECK(code_of([&] {load_dataset(tmp / "nowhere");}) == Errc::IoError);
}

TEST_CASE("corrupted instance metadata is rejected on load") {
  test::TempDir tmp;
  build_dataset(smoke_config(6), tmp / "ds");
  const auto meta = tmp / "ds" / "instances" / "00001" / "meta.json";
  auto j = nlohmann::json::parse(std::ifstream(meta));
  j["split"] = "test_unknown";
  std::ofstream(meta) << j.dump();
  CHECK(code_of([&] {load_dataset(tmp / "ds");}) == Errc::DatasetInvalid);
  CHECK_NOTHROW(load_dataset(tmp / "ds", false));
}

TEST_CASE("SHORTEST on an empty map is near straight") {
  EnvironmentMap env(64, 64, MapKind::Synthetic);
  const auto cost = gt_cost_map(env, InstructionClass::Shortest);
  const Point a{1.5, 1.5};
  const Point b{62.5, 62.5};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto path = gen_gt_path(env, cost, a, b, 400, seed);
    CHECK(path.front() == a);
    CHECK(path.back() == b);
    CHECK(metrics::polyline_length(path) <= 1.05 * distance(a, b));
  }
}

TEST_CASE("PREFER_WIDE ground truth avoids narrow passages") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto w = gen_synthetic_env(seed);
    const auto cost = gt_cost_map(w.env, InstructionClass::PreferWide);
    const auto path = gen_gt_path(w.env, cost, w.start, w.goal, 400, seed);
    for (std::size_t i = 1; i < path.size(); ++i) {
      for (const auto & p : segment_samples(path[i - 1], path[i], 0.5)) {
        const auto c = w.env.cell_of(p);
        for (const auto & ps : w.env.passages()) {
          if (!ps.wide) {
            CHECK_FALSE(ps.contains(c.x, c.y));
          }
        }
      }
    }
  }
}
