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

#include "igprm/dataset.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <iomanip>
#include <map>
#include <tuple>

#include "igprm/error.hpp"
#include "igprm/metrics.hpp"
#include "igprm/parallel.hpp"
#include "igprm/pgm.hpp"
#include "igprm/seeding.hpp"

namespace igprm::dataset
{

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace
{

constexpr int kMaxGtRetries = 10;
constexpr int kMaxInstanceAttempts = 200;

json point_json(Point p)
{
  return json::array({p.x, p.y});
}

Point point_from(const json & j)
{
  if (!j.is_array() || j.size() != 2) {
    throw Error(Errc::DatasetInvalid, "position must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void write_text(const fs::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw Error(Errc::IoError, "cannot write " + path.string());
  }
}

json read_json(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot read " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error & e) {
    throw Error(Errc::DatasetInvalid, path.string() + ": " + e.what());
  }
}

std::string instance_dirname(int id)
{
  std::ostringstream s;
  s << std::setw(5) << std::setfill('0') << id;
  return s.str();
}

SplitTag split_of(const Counts & c, int id)
{
  if (id < c.train) {
    return SplitTag::Train;
  }
  if (id < c.train + c.val) {
    return SplitTag::Val;
  }
  if (id < c.train + c.val + c.test_known()) {
    return SplitTag::TestKnown;
  }
  return SplitTag::TestUnknown;
}

struct InstructionPools
{
  std::vector<int> known;
  std::vector<int> unknown;
};

}  // namespace

double quantize(double v)
{
  return std::round(v * 1e6) / 1e6;
}

std::vector<Point> quantize(std::vector<Point> path)
{
  for (auto & p : path) {
    p = {quantize(p.x), quantize(p.y)};
  }
  return path;
}

std::vector<Point> gen_gt_path(
  const EnvironmentMap & env, const CostMap & gt_cost, Point start, Point goal,
  int n_nodes, std::uint64_t seed, PlannerParams base)
{
  base.n_nodes = n_nodes;
  for (int attempt = 0; attempt <= kMaxGtRetries; ++attempt) {
    base.seed = derive_seed(seed, {0x67745f70617468ULL, static_cast<std::uint64_t>(attempt)});
    auto path = plan(env, gt_cost, start, goal, base);
    if (!path) {
      continue;
    }
    auto pts = quantize(path->points);
    // quantisation must not move the endpoints
    pts.front() = start;
    pts.back() = goal;
    if (metrics::check_success(pts, gt_cost)) {
      return pts;
    }
  }
  throw Error(Errc::OracleFailed, "no ground-truth path after " + std::to_string(kMaxGtRetries) + " retries");
}

json passages_to_json(const std::vector<Passage> & ps)
{
  json arr = json::array();
  for (const auto & p : ps) {
    arr.push_back({{"x0", p.x0}, {"y0", p.y0}, {"w", p.w}, {"h", p.h}, {"wide", p.wide}, {"wall", p.wall}});
  }
  return arr;
}

json instance_meta(const ProblemInstance & inst)
{
  json path = json::array();
  for (const Point & p : inst.gt_path) {
    path.push_back(point_json(p));
  }
  return json{
    {"id", inst.id},
    {"instruction_id", inst.instruction_id},
    {"start", point_json(inst.start)},
    {"goal", point_json(inst.goal)},
    {"gt_path", path},
    {"split", to_string(inst.split)},
    {"passages", passages_to_json(inst.env.passages())},
  };
}

void write_instance(const fs::path & dir, const ProblemInstance & inst)
{
  fs::create_directories(dir);
  pgm::write_environment(dir / "map.pgm", inst.env);
  pgm::write_cost(dir / "cost.pgm", inst.gt_cost);
  write_text(dir / "meta.json", instance_meta(inst).dump(2) + "\n");
}

ProblemInstance read_instance(const fs::path & dir, MapKind kind)
{
  ProblemInstance inst;
  const json meta = read_json(dir / "meta.json");
  try {
    inst.env = pgm::read_environment(dir / "map.pgm", kind);
    inst.gt_cost = pgm::read_cost(dir / "cost.pgm");
    inst.id = meta.at("id").get<int>();
    inst.instruction_id = meta.at("instruction_id").get<int>();
    inst.start = point_from(meta.at("start"));
    inst.goal = point_from(meta.at("goal"));
    for (const auto & p : meta.at("gt_path")) {
      inst.gt_path.push_back(point_from(p));
    }
    auto split = parse_split_tag(meta.at("split").get<std::string>());
    if (!split) {
      throw Error(Errc::DatasetInvalid, "unknown split in " + dir.string());
    }
    inst.split = *split;
    for (const auto & p : meta.value("passages", json::array())) {
      inst.env.add_passage(
        {p.at("x0").get<int>(), p.at("y0").get<int>(), p.at("w").get<int>(), p.at("h").get<int>(),
          p.at("wide").get<bool>(), p.at("wall").get<int>()});
    }
  } catch (const json::exception & e) {
    throw Error(Errc::DatasetInvalid, dir.string() + ": " + e.what());
  }
  return inst;
}

void validate_instance(const ProblemInstance & inst, const InstructionRecord & instr)
{
  auto fail = [&](const std::string & msg) {
      throw Error(Errc::DatasetInvalid, "instance " + std::to_string(inst.id) + ": " + msg);
    };
  if (inst.gt_cost.width() != inst.env.width() || inst.gt_cost.height() != inst.env.height()) {
    fail("cost map size differs from the environment");
  }
  if (inst.gt_path.empty() || inst.gt_path.front() != inst.start || inst.gt_path.back() != inst.goal) {
    fail("gt_path does not run from start to goal");
  }
  if (!metrics::check_success(inst.gt_path, inst.gt_cost)) {
    fail("gt_path crosses a high-cost cell");
  }
  const bool unknown_instance = inst.split == SplitTag::TestUnknown;
  const bool unknown_instruction = instr.split_tag == SplitTag::TestUnknown;
  if (unknown_instance != unknown_instruction) {
    fail("split disagrees with the instruction's split tag");
  }
  if (kind_of(instr.cls) != inst.env.kind()) {
    fail("instruction class does not match the map kind");
  }
}

const InstructionRecord & Dataset::instruction(int id) const
{
  if (id < 0 || id >= static_cast<int>(instructions.size()) || instructions[id].id != id) {
    throw Error(Errc::DatasetInvalid, "no instruction with id " + std::to_string(id));
  }
  return instructions[id];
}

namespace
{

std::vector<InstructionRecord> make_instruction_records(const BuildConfig & cfg)
{
  const int count = cfg.instruction_count > 0 ?
    cfg.instruction_count :
    (cfg.kind == MapKind::Synthetic ? 132 : 90);
  const auto sentences = generate_instructions(cfg.kind, count);
  const auto projection = make_projection(cfg.projection_seed, cfg.k);

  std::optional<EmbeddingClient> client;
  if (cfg.embedding_mode == EmbeddingMode::Endpoint) {
    client.emplace(cfg.endpoint);
  }

  std::vector<InstructionRecord> out;
  std::map<InstructionClass, int> seen_in_class;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    InstructionRecord rec;
    rec.id = static_cast<int>(i);
    rec.text = sentences[i].text;
    rec.cls = sentences[i].cls;
    const int rank = seen_in_class[rec.cls]++;
    rec.split_tag = (cfg.unknown_every > 0 && rank % cfg.unknown_every == cfg.unknown_every - 1) ?
      SplitTag::TestUnknown : SplitTag::Train;
    rec.embedding = client ? client->fetch(rec.text) : pseudo_embed(rec.text);
    rec.projected = project(rec.embedding, projection);
    out.push_back(std::move(rec));
  }
  return out;
}

ProblemInstance make_instance(
  const BuildConfig & cfg, int id, const std::vector<InstructionRecord> & instrs,
  const InstructionPools & pools)
{
  const SplitTag split = split_of(cfg.counts, id);
  const auto & pool = split == SplitTag::TestUnknown ? pools.unknown : pools.known;
  if (pool.empty()) {
    throw Error(Errc::GenerationFailed, "no instructions available for split " + std::string(to_string(split)));
  }

  std::string last_error;
  for (int attempt = 0; attempt < kMaxInstanceAttempts; ++attempt) {
    const std::uint64_t s = derive_seed(cfg.seed, {static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(attempt)});
    std::mt19937_64 rng(s);
    ProblemInstance inst;
    inst.id = id;
    inst.split = split;
    inst.instruction_id = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    const InstructionClass cls = instrs[inst.instruction_id].cls;

    try {
      if (cfg.kind == MapKind::Synthetic) {
        auto world = gen_synthetic_env(rng(), cfg.synth);
        inst.env = std::move(world.env);
        inst.start = world.start;
        inst.goal = world.goal;
      } else {
        if (cfg.indoor_sources.empty()) {
          throw Error(Errc::InvalidArgument, "indoor datasets need at least one source map");
        }
        const auto & src = cfg.indoor_sources[
          std::uniform_int_distribution<std::size_t>(0, cfg.indoor_sources.size() - 1)(rng)];
        const auto crop = load_indoor_map(src, rng());
        inst.env = place_step_obstacles(crop, rng(), cfg.step_count, cfg.step_size);
        std::tie(inst.start, inst.goal) =
          pick_indoor_endpoints(inst.env, cls, rng(), cfg.indoor_min_endpoint_distance);
      }
      inst.gt_cost = gt_cost_map(inst.env, cls);
      inst.gt_path = gen_gt_path(inst.env, inst.gt_cost, inst.start, inst.goal, cfg.gt_nodes, rng(), cfg.gt_planner);
      return inst;
    } catch (const Error & e) {
      // unreadable inputs are fatal; everything else regenerates the instance
      if (is_io_error(e.code()) || e.code() == Errc::InvalidArgument) {
        throw;
      }
      last_error = e.what();
    }
  }
  throw Error(
    Errc::GenerationFailed,
    "instance " + std::to_string(id) + " failed " + std::to_string(kMaxInstanceAttempts) +
    " attempts; last error: " + last_error);
}

}  // namespace

void build_dataset(const BuildConfig & cfg, const fs::path & dir)
{
  if (cfg.counts.train < 1 || cfg.counts.val < 1 || cfg.counts.test < 1) {
    throw Error(Errc::InvalidArgument, "split counts must be positive");
  }
  cfg.synth.validate();
  cfg.gt_planner.validate();
  if (fs::exists(dir) && !fs::is_empty(dir)) {
    throw Error(Errc::IoError, "dataset directory is not empty: " + dir.string());
  }
  fs::create_directories(dir / "instances");

  try {
    const auto instrs = make_instruction_records(cfg);
    InstructionPools pools;
    for (const auto & r : instrs) {
      (r.split_tag == SplitTag::TestUnknown ? pools.unknown : pools.known).push_back(r.id);
    }

    {
      std::string lines;
      std::string emb_lines;
      const std::string model = cfg.embedding_mode == EmbeddingMode::Offline ?
        std::string(kPseudoModelName) : cfg.endpoint.model;
      for (const auto & r : instrs) {
        json j{
          {"id", r.id}, {"text", r.text}, {"cls", to_string(r.cls)},
          {"split_tag", to_string(r.split_tag)}, {"projected", r.projected}};
        lines += j.dump() + "\n";
        emb_lines += EmbeddingCache::to_line({r.text, model, r.embedding});
      }
      write_text(dir / "instructions.jsonl", lines);
      write_text(dir / "embeddings.jsonl", emb_lines);
    }

    parallel_for(
      cfg.counts.total(), cfg.threads, [&](int id) {
        const auto inst = make_instance(cfg, id, instrs, pools);
        write_instance(dir / "instances" / instance_dirname(id), inst);
      });

    json meta{
      {"format_version", 1},
      {"kind", to_string(cfg.kind)},
      {"counts", {{"train", cfg.counts.train}, {"val", cfg.counts.val}, {"test", cfg.counts.test},
        {"test_known", cfg.counts.test_known()},
        {"test_unknown", cfg.counts.test - cfg.counts.test_known()}}},
      {"seeds", {{"base", cfg.seed}, {"projection", cfg.projection_seed}}},
      {"k", cfg.k},
      {"projection_seed", cfg.projection_seed},
      {"embedding_model", cfg.embedding_mode == EmbeddingMode::Offline ?
        std::string(kPseudoModelName) : cfg.endpoint.model},
      {"embedding_dim", kEmbeddingDim},
      {"instruction_count", instrs.size()},
      {"unknown_every", cfg.unknown_every},
      {"gt_nodes", cfg.gt_nodes},
      {"gt_planner", to_json(cfg.gt_planner)},
      {"instances", cfg.counts.total()},
    };
    if (cfg.kind == MapKind::Indoor) {
      meta["step_count"] = cfg.step_count;
      meta["step_size"] = cfg.step_size;
    }
    write_text(dir / "meta.json", meta.dump(2) + "\n");
  } catch (const std::exception & e) {
    std::ofstream marker(dir / "FAILED");
    marker << e.what() << "\n";
    throw;
  }
}

Dataset load_dataset(const fs::path & dir, bool validate)
{
  if (!fs::is_directory(dir)) {
    throw Error(Errc::IoError, "no dataset directory at " + dir.string());
  }
  if (fs::exists(dir / "FAILED")) {
    throw Error(Errc::DatasetInvalid, "dataset build failed: " + dir.string());
  }
  if (!fs::exists(dir / "meta.json")) {
    throw Error(Errc::DatasetInvalid, "no meta.json (incomplete dataset?) in " + dir.string());
  }
  Dataset ds;
  ds.dir = dir;
  ds.meta = read_json(dir / "meta.json");
  try {
    auto kind = parse_map_kind(ds.meta.at("kind").get<std::string>());
    if (!kind) {
      throw Error(Errc::DatasetInvalid, "unknown kind in meta.json");
    }
    ds.kind = *kind;
    ds.k = ds.meta.at("k").get<int>();
    ds.projection_seed = ds.meta.at("projection_seed").get<std::uint64_t>();
  } catch (const json::exception & e) {
    throw Error(Errc::DatasetInvalid, std::string("meta.json: ") + e.what());
  }

  const auto embeddings = EmbeddingCache::read_all(dir / "embeddings.jsonl");
  std::ifstream in(dir / "instructions.jsonl");
  if (!in) {
    throw Error(Errc::IoError, "cannot read instructions.jsonl");
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    try {
      const json j = json::parse(line);
      InstructionRecord r;
      r.id = j.at("id").get<int>();
      r.text = j.at("text").get<std::string>();
      auto cls = parse_instruction_class(j.at("cls").get<std::string>());
      auto tag = parse_split_tag(j.at("split_tag").get<std::string>());
      if (!cls || !tag) {
        throw Error(Errc::DatasetInvalid, "bad class or split in instructions.jsonl");
      }
      r.cls = *cls;
      r.split_tag = *tag;
      r.projected = j.at("projected").get<std::vector<float>>();
      ds.instructions.push_back(std::move(r));
    } catch (const json::exception & e) {
      throw Error(Errc::DatasetInvalid, std::string("instructions.jsonl: ") + e.what());
    }
  }
  if (embeddings.size() != ds.instructions.size()) {
    throw Error(Errc::DatasetInvalid, "embeddings.jsonl and instructions.jsonl differ in length");
  }
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    auto & r = ds.instructions[i];
    if (r.id != static_cast<int>(i) || embeddings[i].text != r.text) {
      throw Error(Errc::DatasetInvalid, "instruction records out of order at line " + std::to_string(i + 1));
    }
    if (embeddings[i].vector.size() != kEmbeddingDim) {
      throw Error(Errc::DatasetInvalid, "embedding " + std::to_string(i) + " is not 1536-D");
    }
    r.embedding = embeddings[i].vector;
    if (static_cast<int>(r.projected.size()) != ds.k) {
      throw Error(Errc::DatasetInvalid, "projected embedding length differs from k");
    }
  }

  const int n = ds.meta.value("instances", 0);
  ds.instances.resize(static_cast<std::size_t>(n));
  for (int id = 0; id < n; ++id) {
    auto inst = read_instance(dir / "instances" / instance_dirname(id), ds.kind);
    if (inst.id != id) {
      throw Error(Errc::DatasetInvalid, "instance folder " + instance_dirname(id) + " holds id " + std::to_string(inst.id));
    }
    if (validate) {
      validate_instance(inst, ds.instruction(inst.instruction_id));
    }
    ds.instances[id] = std::move(inst);
  }
  return ds;
}

}  // namespace igprm::dataset
