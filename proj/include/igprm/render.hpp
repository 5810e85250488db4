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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "igprm/envgen.hpp"
#include "igprm/planner.hpp"

namespace igprm::render
{

inline constexpr std::string_view kWallColor = "#3465a4";
inline constexpr std::string_view kStepLowColor = "#9fc5e8";
inline constexpr std::string_view kStepHighColor = "#1c3d6e";
inline constexpr std::string_view kEdgeColor = "#999999";
inline constexpr std::string_view kPathColor = "#000000";
inline constexpr std::string_view kStartColor = "#00a000";
inline constexpr std::string_view kGoalColor = "#d00000";

struct Scene
{
  const EnvironmentMap * env = nullptr;
  const Roadmap * roadmap = nullptr;
  const std::vector<Point> * path = nullptr;
  Point start;
  Point goal;
  double cell_px = 8.0;
};

std::string svg(const Scene & scene);

/// Throws IoError.
void render_svg(
  const EnvironmentMap & env, const Roadmap * roadmap, const std::vector<Point> * path,
  Point start, Point goal, const std::filesystem::path & out_path);

}  // namespace igprm::render
