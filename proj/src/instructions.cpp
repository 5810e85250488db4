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

#include "igprm/instructions.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

#include "igprm/error.hpp"
#include "igprm/simd/kernels.hpp"

namespace igprm
{

std::string_view to_string(SplitTag tag)
{
  switch (tag) {
    case SplitTag::Train: return "train";
    case SplitTag::Val: return "val";
    case SplitTag::TestKnown: return "test_known";
    case SplitTag::TestUnknown: return "test_unknown";
  }
  return "unknown";
}

std::optional<SplitTag> parse_split_tag(std::string_view s)
{
  for (auto tag : {SplitTag::Train, SplitTag::Val, SplitTag::TestKnown, SplitTag::TestUnknown}) {
    if (to_string(tag) == s) {
      return tag;
    }
  }
  return std::nullopt;
}

namespace
{

using Words = std::vector<std::string_view>;

/// A sentence family: the cartesian product of its slots.
struct TemplateGrid
{
  std::vector<Words> slots;
  // Joins one choice per slot into a sentence.
  std::string (*compose)(const std::vector<std::string_view> &);

  std::size_t size() const
  {
    std::size_t n = 1;
    for (const auto & s : slots) {
      n *= s.size();
    }
    return n;
  }

  std::string at(std::size_t index) const
  {
    std::vector<std::string_view> pick(slots.size());
    // first slot varies slowest
    for (std::size_t i = slots.size(); i-- > 0; ) {
      pick[i] = slots[i][index % slots[i].size()];
      index /= slots[i].size();
    }
    return compose(pick);
  }
};

std::string compose_synthetic(const std::vector<std::string_view> & p)
{
  std::string s;
  s.append(p[0]).append(" ").append(p[1]).append(p[2]).append(".");
  return s;
}

std::string compose_indoor(const std::vector<std::string_view> & p)
{
  // p: subject prefix, robot, verb phrase, manner.
  // "Have/Let the X move" takes a bare infinitive, the others "to move".
  const bool bare = p[0] == "Have the " || p[0] == "Let the ";
  std::string s;
  s.append(p[0]).append(p[1]).append(bare ? " " : " to ").append(p[2]).append(" ").append(p[3]).append(".");
  return s;
}

const Words kSynthTails = {"", " to the goal", " for your journey", " whenever possible"};

TemplateGrid grid_for(InstructionClass cls)
{
  static const Words pick_verbs = {
    "Choose", "Take", "Prefer", "Aim for", "Opt for", "Go through", "Stick to", "Use"};
  static const Words route_verbs = {
    "Find", "Take", "Choose", "Follow", "Head along", "Use", "Pick", "Go via"};
  static const Words narrow = {
    "the narrower passages", "narrow paths", "the tighter gaps", "the more confined routes",
    "slim openings", "the smaller corridors"};
  static const Words wide = {
    "the wider passages", "wide paths", "the broader gaps", "the more spacious routes",
    "roomy openings", "the larger corridors"};
  static const Words shortest = {
    "the shortest route", "the most direct path", "the quickest way", "a direct line",
    "the fastest route", "the briefest path"};

  static const Words subject_prefix = {"Instruct the ", "Tell the ", "Ask the ", "Have the ", "Let the "};
  static const Words wheeled = {"wheeled robot", "wheel-based robot", "robot on wheels"};
  static const Words legged = {"legged robot", "walking robot", "robot with legs"};
  static const Words verbs = {
    "move to the destination", "go to the goal", "travel to the target",
    "head to the destination", "navigate to the goal point"};
  static const Words careful = {"cautiously", "carefully", "with care", "safely", "gently"};
  static const Words rapid = {"rapidly", "quickly", "as fast as possible", "in a hurry", "swiftly"};

  auto indoor = [&](const Words & robots, const Words & manner) {
      return TemplateGrid{{subject_prefix, robots, verbs, manner}, &compose_indoor};
    };

  switch (cls) {
    case InstructionClass::PreferNarrow:
      return {{pick_verbs, narrow, kSynthTails}, &compose_synthetic};
    case InstructionClass::PreferWide:
      return {{pick_verbs, wide, kSynthTails}, &compose_synthetic};
    case InstructionClass::Shortest:
      return {{route_verbs, shortest, kSynthTails}, &compose_synthetic};
    case InstructionClass::WheeledCareful: return indoor(wheeled, careful);
    case InstructionClass::WheeledRapid: return indoor(wheeled, rapid);
    case InstructionClass::LeggedCareful: return indoor(legged, careful);
    case InstructionClass::LeggedRapid: return indoor(legged, rapid);
  }
  return {};
}

/// Visits the grid in a fixed stride order so the first few sentences of a
/// class already differ in every slot.
std::size_t stride_for(std::size_t n)
{
  std::size_t stride = 97;
  while (std::gcd(stride, n) != 1) {
    ++stride;
  }
  return stride;
}

}  // namespace

std::vector<Instruction> generate_instructions(MapKind kind, int count)
{
  const auto classes = classes_for(kind);
  const int n_cls = static_cast<int>(classes.size());
  if (count < n_cls) {
    throw Error(
      Errc::InvalidArgument,
      "need at least " + std::to_string(n_cls) + " instructions for " + std::string(to_string(kind)));
  }

  std::vector<std::vector<std::string>> per_class(classes.size());
  int max_per_class = 0;
  for (int c = 0; c < n_cls; ++c) {
    const int want = count / n_cls + (c < count % n_cls ? 1 : 0);
    max_per_class = std::max(max_per_class, want);
    const TemplateGrid grid = grid_for(classes[c]);
    const std::size_t n = grid.size();
    if (static_cast<std::size_t>(want) > n) {
      throw Error(
        Errc::TemplateExhausted,
        std::string(to_string(classes[c])) + " has only " + std::to_string(n) + " sentences");
    }
    const std::size_t stride = stride_for(n);
    for (int i = 0; i < want; ++i) {
      per_class[c].push_back(grid.at((static_cast<std::size_t>(i) * stride) % n));
    }
  }

  std::vector<Instruction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < max_per_class; ++i) {
    for (int c = 0; c < n_cls; ++c) {
      if (i < static_cast<int>(per_class[c].size())) {
        out.push_back({per_class[c][i], classes[c]});
      }
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text)
{
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u) || u >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) {
    tokens.push_back(std::move(cur));
  }
  return tokens;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : bytes) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<float> pseudo_embed(std::string_view text)
{
  const auto tokens = tokenize(text);
  if (tokens.empty()) {
    throw Error(Errc::EmptyText, "no alphanumeric token in instruction text");
  }
  std::vector<double> acc(kEmbeddingDim, 0.0);
  for (const auto & tok : tokens) {
    std::mt19937_64 rng(fnv1a64(tok));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto & a : acc) {
      a += normal(rng);
    }
  }
  double norm2 = 0.0;
  for (double & a : acc) {
    a /= static_cast<double>(tokens.size());
    norm2 += a * a;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  std::vector<float> out(kEmbeddingDim);
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
    out[i] = static_cast<float>(acc[i] * inv);
  }
  return out;
}

ProjectionMatrix::ProjectionMatrix(int k, std::uint64_t seed, std::vector<float> rows)
: k_(k), seed_(seed), rows_(std::move(rows))
{
  if (rows_.size() != static_cast<std::size_t>(k) * kEmbeddingDim) {
    throw Error(Errc::DimensionMismatch, "projection storage does not match k x 1536");
  }
}

ProjectionMatrix make_projection(std::uint64_t seed, int k)
{
  if (k < 1 || k > static_cast<int>(kEmbeddingDim)) {
    throw Error(Errc::InvalidDim, "projection dimension must lie in [1, 1536], got " + std::to_string(k));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<float> rows(static_cast<std::size_t>(k) * kEmbeddingDim);
  for (auto & r : rows) {
    r = static_cast<float>(normal(rng));
  }
  return ProjectionMatrix(k, seed, std::move(rows));
}

std::vector<float> project(std::span<const float> v, const ProjectionMatrix & m)
{
  if (v.size() != m.cols()) {
    throw Error(
      Errc::DimensionMismatch,
      "expected a " + std::to_string(m.cols()) + "-D vector, got " + std::to_string(v.size()));
  }
  const auto & k = simd::kernels();
  std::vector<float> out(static_cast<std::size_t>(m.k()));
  for (int i = 0; i < m.k(); ++i) {
    out[i] = k.dot_f32(m.row(i).data(), v.data(), v.size());
  }
  return out;
}

}  // namespace igprm
