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
#include <span>
#include <vector>

#include "igprm/envgen.hpp"

namespace igprm::pgm
{

/// 8-bit gray image; wider inputs are rescaled to 0..255 on read.
struct GrayImage
{
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// Reads binary (P5) or ASCII (P2) PGM. Throws UnreadableMap.
GrayImage read(const std::filesystem::path & path);

/// Writes binary P5, maxval 255. Throws IoError.
void write(
  const std::filesystem::path & path, int width, int height,
  std::span<const std::uint8_t> pixels);

// Saved environment encoding.
inline constexpr std::uint8_t kFreeGray = 255;
inline constexpr std::uint8_t kWallGray = 0;
inline constexpr std::uint8_t kStepLowGray = 100;
inline constexpr std::uint8_t kStepHighGray = 180;

void write_environment(const std::filesystem::path & path, const EnvironmentMap & env);

/// Inverse of write_environment; any gray value outside the four class codes
/// is rejected with UnreadableMap. Passage metadata is not part of the image.
EnvironmentMap read_environment(const std::filesystem::path & path, MapKind kind);

/// value = round(cost * 255)
void write_cost(const std::filesystem::path & path, const CostMap & cost);
CostMap read_cost(const std::filesystem::path & path);

}  // namespace igprm::pgm
