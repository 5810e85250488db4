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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "igprm/geometry.hpp"

namespace igprm
{

enum class CellClass : std::uint8_t
{
  Free = 0,
  Wall = 1,
  StepLow = 2,
  StepHigh = 3,
};

enum class MapKind
{
  Synthetic,
  Indoor,
};

enum class InstructionClass
{
  PreferNarrow,
  PreferWide,
  Shortest,
  WheeledCareful,
  WheeledRapid,
  LeggedCareful,
  LeggedRapid,
};

std::string_view to_string(MapKind kind);
std::string_view to_string(InstructionClass cls);
std::optional<MapKind> parse_map_kind(std::string_view s);
std::optional<InstructionClass> parse_instruction_class(std::string_view s);

/// Classes that apply to maps of `kind`, in enum order.
std::vector<InstructionClass> classes_for(MapKind kind);
MapKind kind_of(InstructionClass cls);

/// A carved opening in a wall, kept so ground-truth costs can be assigned
/// from the generator's own bookkeeping.
struct Passage
{
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
  bool wide = false;
  int wall = 0;

  bool contains(int x, int y) const
  {
    return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
  }

  friend bool operator==(const Passage &, const Passage &) = default;
};

class EnvironmentMap
{
public:
  EnvironmentMap() = default;
  EnvironmentMap(int width, int height, MapKind kind, CellClass fill = CellClass::Free);

  int width() const {return width_;}
  int height() const {return height_;}
  MapKind kind() const {return kind_;}

  bool in_bounds(int x, int y) const
  {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  CellClass at(int x, int y) const {return cells_[index(x, y)];}
  CellClass at(Cell c) const {return at(c.x, c.y);}
  /// Class of the cell containing `p`, clamped to the grid.
  CellClass at(Point p) const {return at(cell_of(p));}
  void set(int x, int y, CellClass c) {cells_[index(x, y)] = c;}

  Cell cell_of(Point p) const;
  bool is_wall(Point p) const {return at(p) == CellClass::Wall;}

  std::span<const CellClass> cells() const {return cells_;}
  const std::vector<Passage> & passages() const {return passages_;}
  void add_passage(const Passage & p) {passages_.push_back(p);}

  std::size_t count(CellClass c) const;

  friend bool operator==(const EnvironmentMap &, const EnvironmentMap &) = default;

private:
  std::size_t index(int x, int y) const
  {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  MapKind kind_ = MapKind::Synthetic;
  std::vector<CellClass> cells_;
  std::vector<Passage> passages_;
};

/// Per-cell cost in [0, 1]; ground truth or network output.
class CostMap
{
public:
  CostMap() = default;
  CostMap(int width, int height, float fill = 0.0f);

  int width() const {return width_;}
  int height() const {return height_;}

  float at(int x, int y) const {return values_[index(x, y)];}
  /// Nearest-cell lookup (the cell containing `p`, clamped to the grid).
  float at(Point p) const;
  void set(int x, int y, float v) {values_[index(x, y)] = v;}

  std::span<const float> values() const {return values_;}
  std::span<float> values() {return values_;}

  friend bool operator==(const CostMap &, const CostMap &) = default;

private:
  std::size_t index(int x, int y) const
  {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

struct IntRange
{
  int min = 0;
  int max = 0;
};

struct SynthConfig
{
  int width = 64;
  int height = 64;
  IntRange wall_count_range{1, 4};
  int wall_thickness = 2;
  IntRange narrow_width_range{3, 4};
  IntRange wide_width_range{8, 10};
  int corner_margin = 6;
  /// Minimum free gap between two parallel walls.
  int min_wall_gap = 6;

  void validate() const;
};

struct SynthWorld
{
  EnvironmentMap env;
  Point start;
  Point goal;
};

/// Full-span axis-aligned walls, each pierced by one narrow and one wide
/// passage; start and goal at opposite corners. Throws GenerationFailed after
/// 1000 rejected layouts.
SynthWorld gen_synthetic_env(std::uint64_t seed, const SynthConfig & cfg = {});

/// Places `count` disjoint size x size step squares on FREE cells, each
/// STEP_LOW or STEP_HIGH with probability 1/2.
EnvironmentMap place_step_obstacles(
  const EnvironmentMap & env, std::uint64_t seed, int count = 20, int size = 4);

/// Thresholds a grayscale PGM (bright = free), rescales so the shorter edge
/// is 128 cells and crops a random 64 x 64 patch with >= 30% free cells.
EnvironmentMap load_indoor_map(const std::filesystem::path & path, std::uint64_t crop_seed);

/// Same as load_indoor_map, from an already decoded gray image.
EnvironmentMap crop_indoor_map(
  int width, int height, std::span<const std::uint8_t> gray, std::uint64_t crop_seed);

CostMap gt_cost_map(const EnvironmentMap & env, InstructionClass cls);

/// 4 x H x W one-hot planes in order FREE, WALL, STEP_LOW, STEP_HIGH.
struct ChannelStack
{
  int width = 0;
  int height = 0;
  std::vector<float> data;

  static constexpr int kPlanes = 4;

  const float * plane(int c) const
  {
    return data.data() + static_cast<std::size_t>(c) * width * height;
  }
};

ChannelStack to_input_channels(const EnvironmentMap & env);

/// 4-connected flood fill from `from`; true if `to` is reached through cells
/// accepted by `passable`.
bool connected(
  const EnvironmentMap & env, Cell from, Cell to,
  const std::function<bool(int, int)> & passable);

/// Start/goal for an indoor crop: FREE cells at least `min_distance` apart,
/// joined through cells the class's ground-truth cost leaves below 0.5.
std::pair<Point, Point> pick_indoor_endpoints(
  const EnvironmentMap & env, InstructionClass cls, std::uint64_t seed,
  double min_distance = 24.0);

}  // namespace igprm
