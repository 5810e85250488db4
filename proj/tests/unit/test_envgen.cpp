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

#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "igprm/envgen.hpp"
#include "igprm/error.hpp"

using namespace igprm;

namespace
{

Cell to_cell(Point p)
{
  return {static_cast<int>(p.x), static_cast<int>(p.y)};
}

bool corner_cell(const SynthConfig & cfg, Cell c)
{
  const bool left = c.x < cfg.corner_margin;
  const bool right = c.x >= cfg.width - cfg.corner_margin;
  const bool top = c.y < cfg.corner_margin;
  const bool bottom = c.y >= cfg.height - cfg.corner_margin;
  return (left || right) && (top || bottom);
}

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

TEST_CASE("synthetic maps have 1-4 full-span walls with one narrow and one wide passage each") {
  const SynthConfig cfg;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto w = gen_synthetic_env(seed, cfg);
    CHECK(w.env.width() == 64);
    CHECK(w.env.height() == 64);
    const auto & ps = w.env.passages();
    REQUIRE(ps.size() % 2 == 0);
    const int n_walls = static_cast<int>(ps.size() / 2);
    CHECK(n_walls >= 1);
    CHECK(n_walls <= 4);
    for (int wall = 0; wall < n_walls; ++wall) {
      int narrow = 0;
      int wide = 0;
      for (const auto & p : ps) {
        if (p.wall != wall) {
          continue;
        }
        const int width = std::max(p.w, p.h);
        const int thick = std::min(p.w, p.h);
        CHECK(thick == cfg.wall_thickness);
        if (p.wide) {
          ++wide;
          CHECK(width >= cfg.wide_width_range.min);
          CHECK(width <= cfg.wide_width_range.max);
        } else {
          ++narrow;
          CHECK(width >= cfg.narrow_width_range.min);
          CHECK(width <= cfg.narrow_width_range.max);
        }
        for (int y = p.y0; y < p.y0 + p.h; ++y) {
          for (int x = p.x0; x < p.x0 + p.w; ++x) {
            CHECK(w.env.at(x, y) == CellClass::Free);
          }
        }
      }
      CHECK(narrow == 1);
      CHECK(wide == 1);
    }
    // start and goal in opposite corners
    const Cell s = to_cell(w.start);
    const Cell g = to_cell(w.goal);
    CHECK(corner_cell(cfg, s));
    CHECK(corner_cell(cfg, g));
    CHECK((s.x < 32) != (g.x < 32));
    CHECK((s.y < 32) != (g.y < 32));
    CHECK(connected(w.env, s, g, [&](int x, int y) {return w.env.at(x, y) == CellClass::Free;}));
  }
}

TEST_CASE("wall cells form full-span bands") {
  const auto w = gen_synthetic_env(11);
  std::set<int> wall_rows;
  std::set<int> wall_cols;
  for (const auto & p : w.env.passages()) {
    const bool vertical = p.h > p.w;
    (vertical ? wall_cols : wall_rows).insert(vertical ? p.x0 : p.y0);
  }
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (w.env.at(x, y) != CellClass::Wall) {
        continue;
      }
      bool in_band = false;
      for (int r : wall_rows) {
        in_band = in_band || (y >= r && y < r + 2);
      }
      for (int c : wall_cols) {
        in_band = in_band || (x >= c && x < c + 2);
      }
      CHECK(in_band);
    }
  }
}

TEST_CASE("no-wall config yields an empty map with opposite-corner endpoints") {
  SynthConfig cfg;
  cfg.wall_count_range = {0, 0};
  const auto w = gen_synthetic_env(5, cfg);
  CHECK(w.env.count(CellClass::Free) == 64u * 64u);
  CHECK(w.env.passages().empty());
  CHECK(distance(w.start, w.goal) > 60.0);
}

TEST_CASE("synthetic generation is deterministic per seed") {
  const auto a = gen_synthetic_env(7);
  const auto b = gen_synthetic_env(7);
  CHECK(a.env == b.env);
  CHECK(a.start == b.start);
  CHECK(a.goal == b.goal);
  const auto c = gen_synthetic_env(8);
  CHECK_FALSE(a.env == c.env);
}

TEST_CASE("invalid synth configs are rejected") {
  SynthConfig cfg;
  cfg.narrow_width_range = {3, 9};
  CHECK(code_of([&] {gen_synthetic_env(1, cfg);}) == Errc::InvalidArgument);
}

TEST_CASE("every class stays solvable on generated layouts") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto w = gen_synthetic_env(seed);
    for (auto cls : classes_for(MapKind::Synthetic)) {
      const auto cost = gt_cost_map(w.env, cls);
      CHECK(connected(w.env, to_cell(w.start), to_cell(w.goal), [&](int x, int y) {return cost.at(x, y) < 0.5f;}));
    }
  }
}

TEST_CASE("step obstacles: count, size, labels, disjointness") {
  EnvironmentMap env(64, 64, MapKind::Indoor);
  for (int y = 0; y < 64; ++y) {
    env.set(30, y, CellClass::Wall);
  }
  const auto out = place_step_obstacles(env, 3, 20, 4);
  const auto low = out.count(CellClass::StepLow);
  const auto high = out.count(CellClass::StepHigh);
  CHECK(low + high == 20u * 16u);
  CHECK(low % 16 == 0);
  CHECK(high % 16 == 0);
  CHECK(low > 0);
  CHECK(high > 0);
  CHECK(out.count(CellClass::Wall) == env.count(CellClass::Wall));
  // walls untouched; every step cell was free before
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (env.at(x, y) == CellClass::Wall) {
        CHECK(out.at(x, y) == CellClass::Wall);
      }
    }
  }
  // each 4-connected step component of one label decomposes into whole squares
  CHECK((low + high) / 16 == 20u);
}

TEST_CASE("step obstacles: degenerate cases") {
  EnvironmentMap env(32, 32, MapKind::Indoor);
  CHECK(place_step_obstacles(env, 1, 0, 4) == env);
  EnvironmentMap walls(32, 32, MapKind::Indoor, CellClass::Wall);
  CHECK(code_of([&] {place_step_obstacles(walls, 1, 1, 4);}) == Errc::PlacementFailed);
  EnvironmentMap synth(32, 32, MapKind::Synthetic);
  CHECK(code_of([&] {place_step_obstacles(synth, 1, 1, 4);}) == Errc::ClassKindMismatch);
}

TEST_CASE("indoor crops: resize to a 128-cell short edge") {
  // 2-pixel stripes become 1-cell stripes after halving 256x512 to 128x256
  const int w = 256;
  const int h = 512;
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      gray[static_cast<std::size_t>(y) * w + x] = ((x / 2) % 2 == 0) ? 255 : 0;
    }
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto env = crop_indoor_map(w, h, gray, seed);
    REQUIRE(env.width() == 64);
    REQUIRE(env.height() == 64);
    CHECK(env.kind() == MapKind::Indoor);
    for (int x = 1; x < 64; ++x) {
      CHECK(env.at(x, 0) != env.at(x - 1, 0));
    }
    for (int y = 1; y < 64; ++y) {
      CHECK(env.at(7, y) == env.at(7, 0));
    }
  }
}

TEST_CASE("indoor crops: white accepted, black rejected, deterministic") {
  std::vector<std::uint8_t> white(128 * 128, 255);
  const auto env = crop_indoor_map(128, 128, white, 1);
  CHECK(env.count(CellClass::Free) == 64u * 64u);
  std::vector<std::uint8_t> black(128 * 128, 0);
  CHECK(code_of([&] {crop_indoor_map(128, 128, black, 1);}) == Errc::NoValidCrop);

  std::vector<std::uint8_t> noise(200 * 300);
  std::mt19937_64 rng(9);
  for (auto & v : noise) {
    v = static_cast<std::uint8_t>(rng() % 256);
  }
  CHECK(crop_indoor_map(200, 300, noise, 4) == crop_indoor_map(200, 300, noise, 4));
}

TEST_CASE("gt cost rule table, synthetic") {
  const auto w = gen_synthetic_env(21);
  const auto shortest = gt_cost_map(w.env, InstructionClass::Shortest);
  const auto wide = gt_cost_map(w.env, InstructionClass::PreferWide);
  const auto narrow = gt_cost_map(w.env, InstructionClass::PreferNarrow);
  auto in_passage = [&](int x, int y, bool wide_kind) {
      for (const auto & p : w.env.passages()) {
        if (p.wide == wide_kind && p.contains(x, y)) {
          return true;
        }
      }
      return false;
    };
  int narrow_cells = 0;
  int wide_cells = 0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const bool wall = w.env.at(x, y) == CellClass::Wall;
      CHECK(shortest.at(x, y) == (wall ? 1.0f : 0.0f));
      CHECK(wide.at(x, y) == ((wall || in_passage(x, y, false)) ? 1.0f : 0.0f));
      CHECK(narrow.at(x, y) == ((wall || in_passage(x, y, true)) ? 1.0f : 0.0f));
      // passage supports are disjoint and cover every passage cell
      const bool pw = wide.at(x, y) == 1.0f && !wall;
      const bool pn = narrow.at(x, y) == 1.0f && !wall;
      CHECK_FALSE((pw && pn));
      CHECK((pw || pn) == (in_passage(x, y, false) || in_passage(x, y, true)));
      narrow_cells += in_passage(x, y, false);
      wide_cells += in_passage(x, y, true);
    }
  }
  CHECK(narrow_cells > 0);
  CHECK(wide_cells > narrow_cells);
  CHECK(gt_cost_map(w.env, InstructionClass::PreferWide) == wide);
}

TEST_CASE("gt cost rule table, indoor") {
  EnvironmentMap env(16, 16, MapKind::Indoor);
  env.set(1, 1, CellClass::Wall);
  env.set(2, 2, CellClass::StepLow);
  env.set(3, 3, CellClass::StepHigh);
  using IC = InstructionClass;
  const std::vector<std::tuple<IC, float, float>> table{
    {IC::WheeledCareful, 1.0f, 1.0f},
    {IC::LeggedCareful, 0.0f, 1.0f},
    {IC::WheeledRapid, 0.0f, 0.0f},
    {IC::LeggedRapid, 0.0f, 0.0f},
  };
  for (auto [cls, low, high] : table) {
    const auto c = gt_cost_map(env, cls);
    CHECK(c.at(1, 1) == 1.0f);
    CHECK(c.at(2, 2) == low);
    CHECK(c.at(3, 3) == high);
    CHECK(c.at(5, 5) == 0.0f);
  }
  CHECK(code_of([&] {gt_cost_map(env, IC::Shortest);}) == Errc::ClassKindMismatch);
  EnvironmentMap synth(16, 16, MapKind::Synthetic);
  CHECK(code_of([&] {gt_cost_map(synth, IC::LeggedRapid);}) == Errc::ClassKindMismatch);
}

TEST_CASE("input channels are one-hot") {
  EnvironmentMap env(16, 16, MapKind::Indoor);
  auto ch = to_input_channels(env);
  for (int i = 0; i < 256; ++i) {
    CHECK(ch.plane(0)[i] == 1.0f);
    CHECK(ch.plane(1)[i] == 0.0f);
  }
  env.set(4, 5, CellClass::Wall);
  env.set(6, 7, CellClass::StepHigh);
  ch = to_input_channels(env);
  int walls = 0;
  for (int i = 0; i < 256; ++i) {
    walls += ch.plane(1)[i] == 1.0f;
    float sum = 0.0f;
    for (int c = 0; c < 4; ++c) {
      sum += ch.plane(c)[i];
    }
    CHECK(sum == 1.0f);
  }
  CHECK(walls == 1);
  CHECK(ch.plane(1)[5 * 16 + 4] == 1.0f);
  CHECK(ch.plane(3)[7 * 16 + 6] == 1.0f);
}

TEST_CASE("maps smaller than 16 cells are rejected") {
  CHECK(code_of([] {EnvironmentMap(15, 64, MapKind::Synthetic);}) == Errc::InvalidArgument);
}

TEST_CASE("class names round-trip") {
  for (auto kind : {MapKind::Synthetic, MapKind::Indoor}) {
    for (auto cls : classes_for(kind)) {
      CHECK(parse_instruction_class(to_string(cls)) == cls);
      CHECK(kind_of(cls) == kind);
    }
  }
  CHECK(classes_for(MapKind::Synthetic).size() == 3);
  CHECK(classes_for(MapKind::Indoor).size() == 4);
  CHECK_FALSE(parse_instruction_class("PREFER_BLUE").has_value());
}

TEST_CASE("indoor endpoints are far apart and joined under the class cost") {
  std::vector<std::uint8_t> white(128 * 128, 255);
  const auto crop = crop_indoor_map(128, 128, white, 1);
  const auto env = place_step_obstacles(crop, 2, 20, 4);
  for (auto cls : classes_for(MapKind::Indoor)) {
    const auto [s, g] = pick_indoor_endpoints(env, cls, 3);
    CHECK(distance(s, g) >= 24.0);
    CHECK(env.at(s) == CellClass::Free);
    CHECK(env.at(g) == CellClass::Free);
    const auto cost = gt_cost_map(env, cls);
    CHECK(connected(env, env.cell_of(s), env.cell_of(g), [&](int x, int y) {return cost.at(x, y) < 0.5f;}));
  }
}
