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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "igprm/envgen.hpp"

namespace igprm
{

inline constexpr std::size_t kEmbeddingDim = 1536;

enum class SplitTag
{
  Train,
  Val,
  TestKnown,
  TestUnknown,
};

std::string_view to_string(SplitTag tag);
std::optional<SplitTag> parse_split_tag(std::string_view s);

struct Instruction
{
  std::string text;
  InstructionClass cls;
};

struct InstructionRecord
{
  int id = 0;
  std::string text;
  InstructionClass cls = InstructionClass::Shortest;
  std::vector<float> embedding;  // kEmbeddingDim
  std::vector<float> projected;  // k
  SplitTag split_tag = SplitTag::Train;
};

/// Expands per-class sentence templates into `count` distinct sentences,
/// class-balanced within one and interleaved class by class.
/// Throws TemplateExhausted when a class runs out of distinct sentences.
std::vector<Instruction> generate_instructions(MapKind kind, int count);

/// Lower-cased alphanumeric tokens (bytes >= 0x80 are kept as word bytes).
std::vector<std::string> tokenize(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);

/// Offline stand-in for a sentence embedding model: the L2-normalised mean of
/// per-token standard-normal vectors, each drawn from a generator seeded with
/// the token's FNV-1a hash. Throws EmptyText.
std::vector<float> pseudo_embed(std::string_view text);

inline constexpr std::string_view kPseudoModelName = "pseudo-fnv1a-1536";

/// Gaussian random projection, k x kEmbeddingDim, entries ~ N(0, 1/k).
class ProjectionMatrix
{
public:
  ProjectionMatrix(int k, std::uint64_t seed, std::vector<float> rows);

  int k() const {return k_;}
  std::uint64_t seed() const {return seed_;}
  std::size_t cols() const {return kEmbeddingDim;}
  std::span<const float> row(int i) const
  {
    return std::span<const float>(rows_).subspan(static_cast<std::size_t>(i) * kEmbeddingDim, kEmbeddingDim);
  }
  std::span<const float> data() const {return rows_;}

private:
  int k_;
  std::uint64_t seed_;
  std::vector<float> rows_;
};

/// Throws InvalidDim unless 1 <= k <= kEmbeddingDim.
ProjectionMatrix make_projection(std::uint64_t seed, int k);

/// m * v. Throws DimensionMismatch.
std::vector<float> project(std::span<const float> v, const ProjectionMatrix & m);

}  // namespace igprm
