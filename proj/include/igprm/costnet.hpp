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

#include <array>
#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "igprm/envgen.hpp"

namespace igprm::costnet
{

struct TensorSpec
{
  std::string name;
  std::vector<std::uint32_t> shape;
};

/// Compact conditional encoder-decoder.
///
///   enc0: conv3x3(4 + k -> w0), conv3x3(w0 -> w0)          H x W
///   pool 2x2
///   enc1: conv3x3(w0 -> w1), conv3x3(w1 -> w1)             H/2
///   pool 2x2
///   bott: conv3x3(w1 -> w2), conv3x3(w2 -> w2)             H/4
///   up 2x nearest, concat [up, enc1]
///   dec1: conv3x3(w2 + w1 -> w1), conv3x3(w1 -> w1)        H/2
///   up 2x nearest, concat [up, enc0]
///   dec0: conv3x3(w1 + w0 -> w0), conv3x3(w0 -> w0)        H
///   head: conv1x1(w0 -> 1), sigmoid
///
/// Every 3x3 conv has zero padding 1 and is followed by ReLU. Input channel
/// order is the four one-hot map planes followed by the k embedding planes,
/// each a constant broadcast of one embedding component.
struct NetSpec
{
  int k = 16;
  std::array<int, 3> widths{32, 64, 128};

  int in_channels() const {return 4 + k;}

  /// Tensor names and shapes in canonical file order.
  std::vector<TensorSpec> layout() const;

  nlohmann::json descriptor() const;
};

struct Tensor
{
  std::string name;
  std::vector<std::uint32_t> shape;
  std::vector<float> data;

  std::size_t numel() const;
};

/// Raw IGPW container: descriptor JSON plus named float tensors.
struct Container
{
  nlohmann::json descriptor;
  std::vector<Tensor> tensors;

  const Tensor * find(std::string_view name) const;
};

/// Throws BadMagic, VersionUnsupported, TruncatedFile, IoError.
Container read_container(const std::filesystem::path & path);
Container parse_container(std::span<const std::uint8_t> bytes);
/// Throws IoError.
void write_container(const std::filesystem::path & path, const Container & c);
std::vector<std::uint8_t> serialize_container(const Container & c);

inline constexpr std::uint32_t kFormatVersion = 1;

class Model
{
public:
  /// Validates names and shapes against `spec`; throws ShapeMismatch naming
  /// the first offending tensor.
  Model(NetSpec spec, std::vector<Tensor> tensors);

  const NetSpec & spec() const {return spec_;}
  int k() const {return spec_.k;}
  const std::vector<Tensor> & tensors() const {return tensors_;}

  /// Cost map with the input's spatial size, values strictly inside (0, 1).
  /// Throws DimensionMismatch unless H and W are multiples of 4 and the
  /// embedding has k entries.
  CostMap predict(const ChannelStack & channels, std::span<const float> embedding) const;

  /// Same, returning the raw float plane.
  std::vector<float> forward(const ChannelStack & channels, std::span<const float> embedding) const;

private:
  const Tensor & tensor(std::size_t layout_index) const {return tensors_[layout_index];}

  NetSpec spec_;
  std::vector<Tensor> tensors_;  // canonical layout order
};

Model load_weights(const std::filesystem::path & path);
Model model_from_container(const Container & c);
void save_weights(const std::filesystem::path & path, const Model & model);

/// He-normal conv weights, N(0, 0.05) biases; deterministic per seed.
Model random_model(const NetSpec & spec, std::uint64_t seed);
Model zero_model(const NetSpec & spec);

}  // namespace igprm::costnet
