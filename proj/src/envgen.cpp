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

#include "igprm/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>
#include <random>
#include <string>

#include "igprm/error.hpp"
#include "igprm/pgm.hpp"

namespace igprm
{

std::string_view to_string(MapKind kind)
{
  return kind == MapKind::Synthetic ? "synthetic" : "indoor";
}

std::string_view to_string(InstructionClass cls)
{
  switch (cls) {
    case InstructionClass::PreferNarrow: return "PREFER_NARROW";
    case InstructionClass::PreferWide: return "PREFER_WIDE";
    case InstructionClass::Shortest: return "SHORTEST";
    case InstructionClass::WheeledCareful: return "WHEELED_CAREFUL";
    case InstructionClass::WheeledRapid: return "WHEELED_RAPID";
    case InstructionClass::LeggedCareful: return "LEGGED_CAREFUL";
    case InstructionClass::LeggedRapid: return "LEGGED_RAPID";
  }
  return "UNKNOWN";
}

std::optional<MapKind> parse_map_kind(std::string_view s)
{
  if (s == "synthetic") {
    return MapKind::Synthetic;
  }
  if (s == "indoor") {
    return MapKind::Indoor;
  }
  return std::nullopt;
}

std::optional<InstructionClass> parse_instruction_class(std::string_view s)
{
  for (int i = 0; i <= static_cast<int>(InstructionClass::LeggedRapid); ++i) {
    auto cls = static_cast<InstructionClass>(i);
    if (to_string(cls) == s) {
      return cls;
    }
  }
  return std::nullopt;
}

std::vector<InstructionClass> classes_for(MapKind kind)
{
  if (kind == MapKind::Synthetic) {
    return {InstructionClass::PreferNarrow, InstructionClass::PreferWide, InstructionClass::Shortest};
  }
  return {
    InstructionClass::WheeledCareful, InstructionClass::WheeledRapid,
    InstructionClass::LeggedCareful, InstructionClass::LeggedRapid};
}

MapKind kind_of(InstructionClass cls)
{
  switch (cls) {
    case InstructionClass::PreferNarrow:
    case InstructionClass::PreferWide:
    case InstructionClass::Shortest:
      return MapKind::Synthetic;
    default:
      return MapKind::Indoor;
  }
}

EnvironmentMap::EnvironmentMap(int width, int height, MapKind kind, CellClass fill)
: width_(width), height_(height), kind_(kind)
{
  if (width < 16 || height < 16) {
    throw Error(Errc::InvalidArgument, "environment must be at least 16x16 cells");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Cell EnvironmentMap::cell_of(Point p) const
{
  const int x = std::clamp(static_cast<int>(std::floor(p.x)), 0, width_ - 1);
  const int y = std::clamp(static_cast<int>(std::floor(p.y)), 0, height_ - 1);
  return {x, y};
}

std::size_t EnvironmentMap::count(CellClass c) const
{
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), c));
}

CostMap::CostMap(int width, int height, float fill)
: width_(width), height_(height)
{
  if (width <= 0 || height <= 0) {
    throw Error(Errc::InvalidArgument, "cost map dimensions must be positive");
  }
  values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

float CostMap::at(Point p) const
{
  const int x = std::clamp(static_cast<int>(std::floor(p.x)), 0, width_ - 1);
  const int y = std::clamp(static_cast<int>(std::floor(p.y)), 0, height_ - 1);
  return at(x, y);
}

void SynthConfig::validate() const
{
  auto fail = [](const std::string & msg) {
      throw Error(Errc::InvalidArgument, "SynthConfig: " + msg);
    };
  if (width < 16 || height < 16) {
    fail("map must be at least 16x16");
  }
  if (wall_count_range.min < 0 || wall_count_range.min > wall_count_range.max) {
    fail("bad wall_count_range");
  }
  if (wall_thickness < 1) {
    fail("wall_thickness must be >= 1");
  }
  if (narrow_width_range.min < 1 || narrow_width_range.min > narrow_width_range.max ||
    wide_width_range.min > wide_width_range.max)
  {
    fail("bad passage width range");
  }
  if (narrow_width_range.max >= wide_width_range.min) {
    fail("narrow passages must be strictly narrower than wide ones");
  }
  if (corner_margin < 1) {
    fail("corner_margin must be >= 1");
  }
  const int span = std::min(width, height);
  if (2 * corner_margin + wall_thickness > span) {
    fail("walls do not fit between the corner margins");
  }
  if (narrow_width_range.max + wide_width_range.max + 2 > span) {
    fail("passages do not fit along a wall");
  }
  if (min_wall_gap < 0) {
    fail("min_wall_gap must be >= 0");
  }
}

namespace
{

struct WallBand
{
  bool horizontal = true;
  int pos = 0;  // first row (horizontal) or column (vertical) of the band
};

int uniform_int(std::mt19937_64 & rng, int lo, int hi)
{
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool free_of_other_walls(
  const std::vector<WallBand> & walls, std::size_t self, int s, int w, int thickness)
{
  const bool horizontal = walls[self].horizontal;
  for (std::size_t j = 0; j < walls.size(); ++j) {
    if (j == self || walls[j].horizontal == horizontal) {
      continue;
    }
    // a perpendicular band occupies [pos, pos + thickness) along our axis;
    // keep one clear cell on either side
    const int lo = walls[j].pos - 1;
    const int hi = walls[j].pos + thickness + 1;
    if (s < hi && s + w > lo) {
      return false;
    }
  }
  return true;
}

std::optional<SynthWorld> try_layout(std::mt19937_64 & rng, const SynthConfig & cfg)
{
  EnvironmentMap env(cfg.width, cfg.height, MapKind::Synthetic);
  const int t = cfg.wall_thickness;
  const int n_walls = uniform_int(rng, cfg.wall_count_range.min, cfg.wall_count_range.max);

  std::vector<WallBand> walls;
  for (int i = 0; i < n_walls; ++i) {
    WallBand band;
    band.horizontal = std::bernoulli_distribution(0.5)(rng);
    const int extent = band.horizontal ? cfg.height : cfg.width;
    band.pos = uniform_int(rng, cfg.corner_margin, extent - cfg.corner_margin - t);
    for (const auto & other : walls) {
      if (other.horizontal == band.horizontal &&
        std::abs(other.pos - band.pos) < t + cfg.min_wall_gap)
      {
        return std::nullopt;
      }
    }
    walls.push_back(band);
  }

  for (const auto & band : walls) {
    if (band.horizontal) {
      for (int y = band.pos; y < band.pos + t; ++y) {
        for (int x = 0; x < cfg.width; ++x) {
          env.set(x, y, CellClass::Wall);
        }
      }
    } else {
      for (int x = band.pos; x < band.pos + t; ++x) {
        for (int y = 0; y < cfg.height; ++y) {
          env.set(x, y, CellClass::Wall);
        }
      }
    }
  }

  for (std::size_t i = 0; i < walls.size(); ++i) {
    const auto & band = walls[i];
    const int length = band.horizontal ? cfg.width : cfg.height;
    const int wn = uniform_int(rng, cfg.narrow_width_range.min, cfg.narrow_width_range.max);
    const int ww = uniform_int(rng, cfg.wide_width_range.min, cfg.wide_width_range.max);
    const int sn = uniform_int(rng, 0, length - wn);
    const int sw = uniform_int(rng, 0, length - ww);
    // two cells of wall between the openings
    if (sn < sw + ww + 2 && sw < sn + wn + 2) {
      return std::nullopt;
    }
    if (!free_of_other_walls(walls, i, sn, wn, t) || !free_of_other_walls(walls, i, sw, ww, t)) {
      return std::nullopt;
    }
    for (auto [s, w, wide] : {std::tuple{sn, wn, false}, std::tuple{sw, ww, true}}) {
      Passage p;
      p.wide = wide;
      p.wall = static_cast<int>(i);
      if (band.horizontal) {
        p.x0 = s;
        p.y0 = band.pos;
        p.w = w;
        p.h = t;
      } else {
        p.x0 = band.pos;
        p.y0 = s;
        p.w = t;
        p.h = w;
      }
      for (int y = p.y0; y < p.y0 + p.h; ++y) {
        for (int x = p.x0; x < p.x0 + p.w; ++x) {
          env.set(x, y, CellClass::Free);
        }
      }
      env.add_passage(p);
    }
  }

  // corners: 0 top-left, 1 top-right, 2 bottom-right, 3 bottom-left
  const int first = uniform_int(rng, 0, 3);
  const int second = (first + 2) % 4;
  auto corner_cell = [&](int corner) {
      const int ox = uniform_int(rng, 0, cfg.corner_margin - 1);
      const int oy = uniform_int(rng, 0, cfg.corner_margin - 1);
      const int x = (corner == 1 || corner == 2) ? cfg.width - 1 - ox : ox;
      const int y = (corner == 2 || corner == 3) ? cfg.height - 1 - oy : oy;
      return Cell{x, y};
    };
  const Cell s = corner_cell(first);
  const Cell g = corner_cell(second);

  // every instruction class must remain solvable on this layout
  auto in_kind = [&](int x, int y, bool wide) {
      for (const auto & p : env.passages()) {
        if (p.wide == wide && p.contains(x, y)) {
          return true;
        }
      }
      return false;
    };
  auto open = [&](int x, int y) {return env.at(x, y) != CellClass::Wall;};
  if (!connected(env, s, g, open) ||
    !connected(env, s, g, [&](int x, int y) {return open(x, y) && !in_kind(x, y, false);}) ||
    !connected(env, s, g, [&](int x, int y) {return open(x, y) && !in_kind(x, y, true);}))
  {
    return std::nullopt;
  }
  return SynthWorld{std::move(env), cell_center(s), cell_center(g)};
}

}  // namespace

SynthWorld gen_synthetic_env(std::uint64_t seed, const SynthConfig & cfg)
{
  cfg.validate();
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt <= 1000; ++attempt) {
    if (auto world = try_layout(rng, cfg)) {
      return std::move(*world);
    }
  }
  throw Error(Errc::GenerationFailed, "no valid layout after 1000 rejections, seed " + std::to_string(seed));
}

EnvironmentMap place_step_obstacles(
  const EnvironmentMap & env, std::uint64_t seed, int count, int size)
{
  if (env.kind() != MapKind::Indoor) {
    throw Error(Errc::ClassKindMismatch, "step obstacles apply to indoor maps only");
  }
  if (count < 0 || size < 1) {
    throw Error(Errc::InvalidArgument, "count must be >= 0 and size >= 1");
  }
  EnvironmentMap out = env;
  if (count == 0) {
    return out;
  }
  if (size > env.width() || size > env.height()) {
    throw Error(Errc::PlacementFailed, "step size exceeds the map");
  }
  std::mt19937_64 rng(seed);
  const long max_rejections = 10L * count * 100;
  long rejections = 0;
  int placed = 0;
  while (placed < count) {
    const int x0 = uniform_int(rng, 0, env.width() - size);
    const int y0 = uniform_int(rng, 0, env.height() - size);
    const bool high = std::bernoulli_distribution(0.5)(rng);
    bool ok = true;
    for (int y = y0; y < y0 + size && ok; ++y) {
      for (int x = x0; x < x0 + size; ++x) {
        if (out.at(x, y) != CellClass::Free) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      if (++rejections > max_rejections) {
        throw Error(
          Errc::PlacementFailed,
          "placed " + std::to_string(placed) + " of " + std::to_string(count) + " steps");
      }
      continue;
    }
    const CellClass label = high ? CellClass::StepHigh : CellClass::StepLow;
    for (int y = y0; y < y0 + size; ++y) {
      for (int x = x0; x < x0 + size; ++x) {
        out.set(x, y, label);
      }
    }
    ++placed;
  }
  return out;
}

EnvironmentMap crop_indoor_map(
  int width, int height, std::span<const std::uint8_t> gray, std::uint64_t crop_seed)
{
  constexpr int kShortEdge = 128;
  constexpr int kCrop = 64;
  if (width <= 0 || height <= 0 ||
    gray.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
  {
    throw Error(Errc::UnreadableMap, "image size mismatch");
  }
  const double scale = static_cast<double>(kShortEdge) / std::min(width, height);
  const int rw = std::max(kShortEdge, static_cast<int>(std::lround(width * scale)));
  const int rh = std::max(kShortEdge, static_cast<int>(std::lround(height * scale)));

  // nearest-neighbour resample, then threshold at 128
  std::vector<std::uint8_t> is_free(static_cast<std::size_t>(rw) * rh);
  for (int y = 0; y < rh; ++y) {
    const int sy = std::min(height - 1, static_cast<int>((y + 0.5) / scale));
    for (int x = 0; x < rw; ++x) {
      const int sx = std::min(width - 1, static_cast<int>((x + 0.5) / scale));
      is_free[static_cast<std::size_t>(y) * rw + x] =
        gray[static_cast<std::size_t>(sy) * width + sx] >= 128 ? 1 : 0;
    }
  }

  std::mt19937_64 rng(crop_seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int x0 = uniform_int(rng, 0, rw - kCrop);
    const int y0 = uniform_int(rng, 0, rh - kCrop);
    int n_free = 0;
    for (int y = 0; y < kCrop; ++y) {
      for (int x = 0; x < kCrop; ++x) {
        n_free += is_free[static_cast<std::size_t>(y0 + y) * rw + x0 + x];
      }
    }
    if (n_free < 0.3 * kCrop * kCrop) {
      continue;
    }
    EnvironmentMap env(kCrop, kCrop, MapKind::Indoor);
    for (int y = 0; y < kCrop; ++y) {
      for (int x = 0; x < kCrop; ++x) {
        if (!is_free[static_cast<std::size_t>(y0 + y) * rw + x0 + x]) {
          env.set(x, y, CellClass::Wall);
        }
      }
    }
    return env;
  }
  throw Error(Errc::NoValidCrop, "no 64x64 crop with >= 30% free cells after 1000 attempts");
}

EnvironmentMap load_indoor_map(const std::filesystem::path & path, std::uint64_t crop_seed)
{
  const pgm::GrayImage img = pgm::read(path);
  return crop_indoor_map(img.width, img.height, img.pixels, crop_seed);
}

CostMap gt_cost_map(const EnvironmentMap & env, InstructionClass cls)
{
  if (kind_of(cls) != env.kind()) {
    throw Error(
      Errc::ClassKindMismatch,
      std::string(to_string(cls)) + " does not apply to " + std::string(to_string(env.kind())) +
      " maps");
  }
  CostMap cost(env.width(), env.height());
  const bool step_low_high =
    cls == InstructionClass::WheeledCareful;
  const bool step_high_high =
    cls == InstructionClass::WheeledCareful || cls == InstructionClass::LeggedCareful;

  for (int y = 0; y < env.height(); ++y) {
    for (int x = 0; x < env.width(); ++x) {
      float v = 0.0f;
      switch (env.at(x, y)) {
        case CellClass::Wall: v = 1.0f; break;
        case CellClass::StepLow: v = step_low_high ? 1.0f : 0.0f; break;
        case CellClass::StepHigh: v = step_high_high ? 1.0f : 0.0f; break;
        case CellClass::Free: break;
      }
      cost.set(x, y, v);
    }
  }

  if (cls == InstructionClass::PreferWide || cls == InstructionClass::PreferNarrow) {
    // the disfavoured passage width gets the wall cost
    const bool penalise_wide = cls == InstructionClass::PreferNarrow;
    for (const auto & p : env.passages()) {
      if (p.wide != penalise_wide) {
        continue;
      }
      for (int y = p.y0; y < p.y0 + p.h; ++y) {
        for (int x = p.x0; x < p.x0 + p.w; ++x) {
          cost.set(x, y, 1.0f);
        }
      }
    }
  }
  return cost;
}

ChannelStack to_input_channels(const EnvironmentMap & env)
{
  ChannelStack stack;
  stack.width = env.width();
  stack.height = env.height();
  const std::size_t plane = static_cast<std::size_t>(env.width()) * env.height();
  stack.data.assign(ChannelStack::kPlanes * plane, 0.0f);
  const auto cells = env.cells();
  for (std::size_t i = 0; i < plane; ++i) {
    stack.data[static_cast<std::size_t>(cells[i]) * plane + i] = 1.0f;
  }
  return stack;
}

bool connected(
  const EnvironmentMap & env, Cell from, Cell to,
  const std::function<bool(int, int)> & passable)
{
  if (!env.in_bounds(from.x, from.y) || !env.in_bounds(to.x, to.y) ||
    !passable(from.x, from.y) || !passable(to.x, to.y))
  {
    return false;
  }
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(env.width()) * env.height(), 0);
  std::queue<Cell> frontier;
  frontier.push(from);
  seen[static_cast<std::size_t>(from.y) * env.width() + from.x] = 1;
  constexpr int dx[4] = {1, -1, 0, 0};
  constexpr int dy[4] = {0, 0, 1, -1};
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    if (c == to) {
      return true;
    }
    for (int k = 0; k < 4; ++k) {
      const int nx = c.x + dx[k];
      const int ny = c.y + dy[k];
      if (!env.in_bounds(nx, ny)) {
        continue;
      }
      auto & s = seen[static_cast<std::size_t>(ny) * env.width() + nx];
      if (s || !passable(nx, ny)) {
        continue;
      }
      s = 1;
      frontier.push({nx, ny});
    }
  }
  return false;
}

std::pair<Point, Point> pick_indoor_endpoints(
  const EnvironmentMap & env, InstructionClass cls, std::uint64_t seed, double min_distance)
{
  const CostMap cost = gt_cost_map(env, cls);
  std::vector<Cell> free_cells;
  for (int y = 0; y < env.height(); ++y) {
    for (int x = 0; x < env.width(); ++x) {
      if (env.at(x, y) == CellClass::Free) {
        free_cells.push_back({x, y});
      }
    }
  }
  if (free_cells.size() < 2) {
    throw Error(Errc::GenerationFailed, "not enough free cells for start and goal");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
  auto passable = [&](int x, int y) {return cost.at(x, y) < 0.5f;};
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Cell s = free_cells[pick(rng)];
    const Cell g = free_cells[pick(rng)];
    if (distance(cell_center(s), cell_center(g)) < min_distance) {
      continue;
    }
    if (connected(env, s, g, passable)) {
      return {cell_center(s), cell_center(g)};
    }
  }
  throw Error(Errc::GenerationFailed, "no connected start/goal pair in crop");
}

}  // namespace igprm
