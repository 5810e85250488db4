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

// igprm command-line driver.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "igprm/bench.hpp"
#include "igprm/config.hpp"
#include "igprm/costnet.hpp"
#include "igprm/dataset.hpp"
#include "igprm/embedding_client.hpp"
#include "igprm/envgen.hpp"
#include "igprm/error.hpp"
#include "igprm/instructions.hpp"
#include "igprm/metrics.hpp"
#include "igprm/pgm.hpp"
#include "igprm/planner.hpp"
#include "igprm/render.hpp"
#include "igprm/seeding.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace igprm::cli
{

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct Globals
{
  std::optional<std::uint64_t> seed;
  std::string config_path;
  bool print_config = false;
};

AppConfig effective_config(const Globals & g)
{
  AppConfig cfg = g.config_path.empty() ? AppConfig{} : load_config(g.config_path);
  if (g.seed) {
    cfg.seed = *g.seed;
  }
  return cfg;
}

Point parse_point(const std::string & s)
{
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw Error(Errc::InvalidArgument, "expected x,y but got '" + s + "'");
  }
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception &) {
    throw Error(Errc::InvalidArgument, "expected x,y but got '" + s + "'");
  }
}

json point_json(Point p)
{
  return json::array({p.x, p.y});
}

MapKind parse_kind(const std::string & s)
{
  auto k = parse_map_kind(s);
  if (!k) {
    throw Error(Errc::InvalidArgument, "unknown map kind '" + s + "' (synthetic|indoor)");
  }
  return *k;
}

InstructionClass parse_class(const std::string & s)
{
  auto c = parse_instruction_class(s);
  if (!c) {
    throw Error(Errc::InvalidArgument, "unknown instruction class '" + s + "'");
  }
  return *c;
}

void write_file(const fs::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw Error(Errc::IoError, "cannot write " + path.string());
  }
}

json read_json_file(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoError, "cannot read " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception & e) {
    throw Error(Errc::InvalidArgument, path.string() + ": " + e.what());
  }
}

const dataset::ProblemInstance & find_instance(const dataset::Dataset & ds, int id)
{
  if (id < 0 || id >= static_cast<int>(ds.instances.size())) {
    throw Error(Errc::InvalidArgument, "instance " + std::to_string(id) + " not in dataset");
  }
  return ds.instances[static_cast<std::size_t>(id)];
}

std::vector<float> text_embedding(const std::string & text, const AppConfig & cfg, int k)
{
  return project(pseudo_embed(text), make_projection(cfg.dataset.projection_seed, k));
}

json path_json(const std::optional<PlanPath> & path)
{
  if (!path) {
    return {{"status", "no_path"}, {"points", nullptr}};
  }
  json pts = json::array();
  for (const auto & p : path->points) {
    pts.push_back(point_json(p));
  }
  return {
    {"status", "ok"}, {"points", pts}, {"node_ids", path->node_ids},
    {"edge_costs", path->edge_costs}, {"total_cost", path->total_cost}, {"length", path->length}};
}

std::optional<std::vector<Point>> path_from_json(const json & j)
{
  if (!j.contains("points") || j["points"].is_null()) {
    return std::nullopt;
  }
  std::vector<Point> pts;
  for (const auto & p : j["points"]) {
    pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  return pts;
}

json eval_json(const metrics::EvalResult & r)
{
  auto num = [](double v) {return std::isnan(v) ? json(nullptr) : json(v);};
  return {
    {"success", r.success}, {"spl_term", r.spl_term}, {"dtw", num(r.dtw)},
    {"produced_length", r.produced_length}, {"gt_length", r.gt_length},
    {"hidden_cost", r.hidden_cost}, {"node_hidden_cost", r.node_hidden_cost}};
}

std::vector<int> parse_int_list(const std::vector<std::string> & items)
{
  std::vector<int> out;
  for (const auto & s : items) {
    try {
      out.push_back(std::stoi(s));
    } catch (const std::exception &) {
      throw Error(Errc::InvalidArgument, "expected an integer but got '" + s + "'");
    }
  }
  return out;
}

std::vector<bench::Method> parse_methods(const std::vector<std::string> & items)
{
  std::vector<bench::Method> out;
  for (const auto & s : items) {
    auto m = bench::parse_method(s);
    if (!m) {
      throw Error(Errc::InvalidArgument, "unknown method '" + s + "'");
    }
    out.push_back(*m);
  }
  return out;
}

void write_report(const bench::Report & rep, const std::string & rows_path, const std::string & summary_path)
{
  if (rows_path.empty()) {
    bench::write_rows_csv(std::cout, rep.rows);
  } else {
    std::ostringstream s;
    bench::write_rows_csv(s, rep.rows);
    write_file(rows_path, s.str());
  }
  if (summary_path.empty()) {
    bench::write_aggregates_csv(std::cerr, rep.aggregates);
  } else {
    std::ostringstream s;
    bench::write_aggregates_csv(s, rep.aggregates);
    write_file(summary_path, s.str());
  }
}

int run(int argc, char ** argv)
{
  CLI::App app{"Instruction-guided probabilistic roadmaps"};
  app.require_subcommand(0, 1);
  Globals g;
  app.add_option("--seed", g.seed, "Base seed (overrides the config file)");
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_flag("--print-config", g.print_config, "Print the effective config as JSON and exit");

  // gen-synth
  auto * gen_synth = app.add_subcommand("gen-synth", "Generate one synthetic wall-and-passage map");
  std::string gs_out;
  gen_synth->add_option("--out", gs_out, "Output PGM; a .json sidecar holds start, goal and passages")->required();

  // gen-indoor
  auto * gen_indoor = app.add_subcommand("gen-indoor", "Crop an indoor floor plan and scatter step obstacles");
  std::string gi_map;
  std::string gi_out;
  std::string gi_class;
  gen_indoor->add_option("--map", gi_map, "Source floor plan (PGM, bright = free)")->required();
  gen_indoor->add_option("--out", gi_out, "Output PGM")->required();
  gen_indoor->add_option("--class", gi_class, "Also pick start/goal for this instruction class");

  // gen-instructions
  auto * gen_instr = app.add_subcommand("gen-instructions", "Emit the templated instruction pool");
  std::string gn_kind = "synthetic";
  int gn_count = 0;
  std::string gn_out;
  gen_instr->add_option("--kind", gn_kind, "synthetic|indoor");
  gen_instr->add_option("--count", gn_count, "Number of sentences (0 = 132 synthetic, 90 indoor)");
  gen_instr->add_option("--out", gn_out, "Output JSON lines (stdout if omitted)");

  // embed
  auto * embed = app.add_subcommand("embed", "Embed instruction sentences into the cache file");
  std::string em_in;
  std::string em_out;
  std::vector<std::string> em_texts;
  bool em_offline = false;
  std::string em_endpoint;
  std::string em_cred;
  embed->add_option("--in", em_in, "JSON lines with a \"text\" field");
  embed->add_option("--text", em_texts, "Sentence to embed (repeatable)");
  embed->add_option("--out", em_out, "Embedding cache (JSON lines)")->required();
  auto * off_flag = embed->add_flag("--offline", em_offline, "Deterministic pseudo-embeddings");
  auto * ep_opt = embed->add_option("--endpoint", em_endpoint, "Embedding endpoint URL");
  auto * cred_opt = embed->add_option("--credential-env", em_cred, "Environment variable holding the API key");
  off_flag->excludes(ep_opt);
  ep_opt->needs(cred_opt);

  // build-dataset
  auto * build = app.add_subcommand("build-dataset", "Generate a full dataset directory");
  std::string bd_kind = "synthetic";
  std::string bd_out;
  std::vector<std::string> bd_sources;
  std::optional<int> bd_train;
  std::optional<int> bd_val;
  std::optional<int> bd_test;
  std::optional<int> bd_k;
  std::optional<int> bd_threads;
  bool bd_offline = false;
  std::string bd_endpoint;
  std::string bd_cred;
  build->add_option("--kind", bd_kind, "synthetic|indoor");
  build->add_option("--out", bd_out, "Output directory (must be empty or absent)")->required();
  build->add_option("--indoor-source", bd_sources, "Indoor floor plan PGM (repeatable)");
  build->add_option("--train", bd_train, "Training instances");
  build->add_option("--val", bd_val, "Validation instances");
  build->add_option("--test", bd_test, "Test instances (half known, half unknown)");
  build->add_option("--k", bd_k, "Projected embedding dimension");
  build->add_option("--threads", bd_threads, "Worker threads (0 = all cores)");
  auto * bd_off = build->add_flag("--offline", bd_offline, "Pseudo-embeddings (default)");
  auto * bd_ep = build->add_option("--endpoint", bd_endpoint, "Embedding endpoint URL");
  auto * bd_cr = build->add_option("--credential-env", bd_cred, "Environment variable holding the API key");
  bd_off->excludes(bd_ep);
  bd_ep->needs(bd_cr);

  // predict
  auto * predict = app.add_subcommand("predict", "Predict a cost map with a trained network");
  std::string pr_weights;
  std::string pr_dataset;
  int pr_instance = -1;
  std::string pr_map;
  std::string pr_map_kind = "synthetic";
  std::string pr_text;
  std::string pr_out;
  predict->add_option("--weights", pr_weights, "Weight file")->required();
  predict->add_option("--dataset", pr_dataset, "Dataset directory");
  predict->add_option("--instance", pr_instance, "Instance id within --dataset");
  predict->add_option("--map", pr_map, "Environment PGM (instead of --dataset)");
  predict->add_option("--kind", pr_map_kind, "Kind of --map");
  predict->add_option("--text", pr_text, "Instruction sentence for --map (offline embedding)");
  predict->add_option("--out", pr_out, "Output cost PGM")->required();

  // plan
  auto * plan_cmd = app.add_subcommand("plan", "Build a roadmap and search it");
  std::string pl_dataset;
  int pl_instance = -1;
  std::string pl_map;
  std::string pl_map_kind = "synthetic";
  std::string pl_cost;
  std::string pl_start;
  std::string pl_goal;
  std::string pl_method = "igprm_oracle";
  std::string pl_weights;
  std::optional<int> pl_nodes;
  std::string pl_out;
  std::string pl_roadmap;
  plan_cmd->add_option("--dataset", pl_dataset, "Dataset directory");
  plan_cmd->add_option("--instance", pl_instance, "Instance id within --dataset");
  plan_cmd->add_option("--method", pl_method, "igprm_oracle|igprm_learned|prm_baseline (with --dataset)");
  plan_cmd->add_option("--weights", pl_weights, "Weight file for igprm_learned");
  plan_cmd->add_option("--map", pl_map, "Environment PGM (instead of --dataset)");
  plan_cmd->add_option("--kind", pl_map_kind, "Kind of --map");
  plan_cmd->add_option("--cost", pl_cost, "Cost PGM for --map (omit for the uniform baseline)");
  plan_cmd->add_option("--start", pl_start, "Start as x,y");
  plan_cmd->add_option("--goal", pl_goal, "Goal as x,y");
  plan_cmd->add_option("--nodes", pl_nodes, "Sampled nodes");
  plan_cmd->add_option("--out", pl_out, "Path JSON (stdout if omitted)");
  plan_cmd->add_option("--roadmap-out", pl_roadmap, "Also write the roadmap JSON");

  // eval
  auto * eval_cmd = app.add_subcommand("eval", "Score a path against an instance's ground truth");
  std::string ev_dataset;
  int ev_instance = -1;
  std::string ev_path;
  eval_cmd->add_option("--dataset", ev_dataset, "Dataset directory")->required();
  eval_cmd->add_option("--instance", ev_instance, "Instance id")->required();
  eval_cmd->add_option("--path", ev_path, "Path JSON written by `plan`")->required();

  // bench
  auto * bench_cmd = app.add_subcommand("bench", "Run the method x node-count grid on the test split");
  std::string bn_dataset;
  std::vector<std::string> bn_methods;
  std::vector<std::string> bn_nodes;
  std::optional<int> bn_trials;
  std::string bn_weights;
  std::string bn_out;
  std::string bn_summary;
  bench_cmd->add_option("--dataset", bn_dataset, "Dataset directory")->required();
  bench_cmd->add_option("--methods", bn_methods, "Methods")->delimiter(',');
  bench_cmd->add_option("--nodes", bn_nodes, "Node counts")->delimiter(',');
  bench_cmd->add_option("--trials", bn_trials, "Trials per instance");
  bench_cmd->add_option("--weights", bn_weights, "Weight file for igprm_learned");
  bench_cmd->add_option("--out", bn_out, "Per-row CSV (stdout if omitted)");
  bench_cmd->add_option("--summary", bn_summary, "Aggregate CSV (stderr if omitted)");

  // ablate
  auto * ablate = app.add_subcommand("ablate", "Embedding-dimension ablation on the test split");
  std::string ab_dataset;
  std::vector<std::string> ab_weights;
  std::vector<std::string> ab_dims;
  bool ab_oracle = false;
  std::string ab_out;
  std::string ab_summary;
  ablate->add_option("--dataset", ab_dataset, "Dataset directory")->required();
  ablate->add_option("--weights", ab_weights, "Weight files, one per dimension (repeatable)");
  ablate->add_option("--dims", ab_dims, "Dimensions")->delimiter(',');
  ablate->add_flag("--oracle-substitution", ab_oracle, "Use ground-truth costs for every dimension");
  ablate->add_option("--out", ab_out, "Per-row CSV (stdout if omitted)");
  ablate->add_option("--summary", ab_summary, "Aggregate CSV (stderr if omitted)");

  // runtime
  auto * runtime = app.add_subcommand("runtime", "Time cost prediction and planning");
  std::string rt_dataset;
  int rt_instance = -1;
  std::string rt_weights;
  std::optional<int> rt_nodes;
  std::optional<int> rt_repeats;
  runtime->add_option("--dataset", rt_dataset, "Dataset directory")->required();
  runtime->add_option("--instance", rt_instance, "Instance id (default: first test instance)");
  runtime->add_option("--weights", rt_weights, "Weight file")->required();
  runtime->add_option("--nodes", rt_nodes, "Planner nodes");
  runtime->add_option("--repeats", rt_repeats, "Timed repetitions");

  // render
  auto * render_cmd = app.add_subcommand("render", "Draw a map, roadmap and path as SVG");
  std::string rd_dataset;
  int rd_instance = -1;
  std::string rd_map;
  std::string rd_map_kind = "synthetic";
  std::string rd_roadmap;
  std::string rd_path;
  std::string rd_start;
  std::string rd_goal;
  std::string rd_out;
  render_cmd->add_option("--dataset", rd_dataset, "Dataset directory");
  render_cmd->add_option("--instance", rd_instance, "Instance id; draws its ground-truth path unless --path is given");
  render_cmd->add_option("--map", rd_map, "Environment PGM (instead of --dataset)");
  render_cmd->add_option("--kind", rd_map_kind, "Kind of --map");
  render_cmd->add_option("--roadmap", rd_roadmap, "Roadmap JSON from `plan --roadmap-out`");
  render_cmd->add_option("--path", rd_path, "Path JSON from `plan`");
  render_cmd->add_option("--start", rd_start, "Start as x,y");
  render_cmd->add_option("--goal", rd_goal, "Goal as x,y");
  render_cmd->add_option("--out", rd_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  const AppConfig cfg = effective_config(g);
  if (g.print_config) {
    std::cout << to_json(cfg).dump(2) << "\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitValidation;
  }

  if (*gen_synth) {
    const auto world = gen_synthetic_env(cfg.seed, cfg.synth);
    pgm::write_environment(gs_out, world.env);
    json side{
      {"kind", "synthetic"}, {"seed", cfg.seed}, {"start", point_json(world.start)},
      {"goal", point_json(world.goal)}, {"passages", dataset::passages_to_json(world.env.passages())}};
    write_file(fs::path(gs_out).replace_extension(".json"), side.dump(2) + "\n");
    return 0;
  }

  if (*gen_indoor) {
    const auto crop = load_indoor_map(gi_map, derive_seed(cfg.seed, {0}));
    const auto env = place_step_obstacles(crop, derive_seed(cfg.seed, {1}), cfg.indoor.step_count, cfg.indoor.step_size);
    pgm::write_environment(gi_out, env);
    json side{{"kind", "indoor"}, {"seed", cfg.seed}, {"source", gi_map}};
    if (!gi_class.empty()) {
      const auto cls = parse_class(gi_class);
      const auto [s, t] = pick_indoor_endpoints(env, cls, derive_seed(cfg.seed, {2}), cfg.indoor.min_endpoint_distance);
      side["class"] = gi_class;
      side["start"] = point_json(s);
      side["goal"] = point_json(t);
    }
    write_file(fs::path(gi_out).replace_extension(".json"), side.dump(2) + "\n");
    return 0;
  }

  if (*gen_instr) {
    const auto kind = parse_kind(gn_kind);
    const int count = gn_count > 0 ? gn_count : (kind == MapKind::Synthetic ? 132 : 90);
    std::string lines;
    int id = 0;
    for (const auto & s : generate_instructions(kind, count)) {
      lines += json{{"id", id++}, {"text", s.text}, {"cls", to_string(s.cls)}}.dump() + "\n";
    }
    if (gn_out.empty()) {
      std::cout << lines;
    } else {
      write_file(gn_out, lines);
    }
    return 0;
  }

  if (*embed) {
    std::vector<std::string> texts = em_texts;
    if (!em_in.empty()) {
      std::ifstream in(em_in);
      if (!in) {
        throw Error(Errc::IoError, "cannot read " + em_in);
      }
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty()) {
          try {
            texts.push_back(json::parse(line).at("text").get<std::string>());
          } catch (const json::exception & e) {
            throw Error(Errc::InvalidArgument, em_in + ": " + e.what());
          }
        }
      }
    }
    if (texts.empty()) {
      throw Error(Errc::InvalidArgument, "nothing to embed; pass --in or --text");
    }
    if (!em_offline && em_endpoint.empty()) {
      throw Error(Errc::InvalidArgument, "choose --offline or --endpoint");
    }
    if (em_endpoint.empty()) {
      EmbeddingCache cache(em_out);
      for (const auto & t : texts) {
        if (!cache.lookup(t, kPseudoModelName)) {
          cache.append({t, std::string(kPseudoModelName), pseudo_embed(t)});
        }
      }
      std::cerr << "embedded " << texts.size() << " sentences offline\n";
    } else {
      EndpointConfig ep;
      ep.url = em_endpoint;
      ep.credential_env = em_cred;
      ep.cache_path = em_out;
      ep.model = cfg.embedding.model;
      ep.max_retries = cfg.embedding.max_retries;
      ep.initial_backoff = std::chrono::milliseconds(cfg.embedding.initial_backoff_ms);
      ep.timeout = std::chrono::seconds(cfg.embedding.timeout_s);
      EmbeddingClient client(ep);
      for (const auto & t : texts) {
        client.fetch(t);
      }
      std::cerr << "embedded " << texts.size() << " sentences, " << client.requests_made() << " requests\n";
    }
    return 0;
  }

  if (*build) {
    dataset::BuildConfig bc;
    bc.kind = parse_kind(bd_kind);
    bc.seed = cfg.seed;
    bc.counts = cfg.dataset.counts;
    bc.counts.train = bd_train.value_or(bc.counts.train);
    bc.counts.val = bd_val.value_or(bc.counts.val);
    bc.counts.test = bd_test.value_or(bc.counts.test);
    bc.projection_seed = cfg.dataset.projection_seed;
    bc.k = bd_k.value_or(cfg.dataset.k);
    bc.instruction_count = cfg.dataset.instruction_count;
    bc.unknown_every = cfg.dataset.unknown_every;
    bc.synth = cfg.synth;
    bc.gt_planner = cfg.planner;
    bc.gt_nodes = cfg.dataset.gt_nodes;
    bc.step_count = cfg.indoor.step_count;
    bc.step_size = cfg.indoor.step_size;
    bc.indoor_min_endpoint_distance = cfg.indoor.min_endpoint_distance;
    bc.threads = bd_threads.value_or(cfg.dataset.threads);
    for (const auto & s : bd_sources) {
      bc.indoor_sources.emplace_back(s);
    }
    if (!bd_endpoint.empty()) {
      bc.embedding_mode = dataset::EmbeddingMode::Endpoint;
      bc.endpoint.url = bd_endpoint;
      bc.endpoint.credential_env = bd_cred;
      bc.endpoint.model = cfg.embedding.model;
      bc.endpoint.max_retries = cfg.embedding.max_retries;
      bc.endpoint.initial_backoff = std::chrono::milliseconds(cfg.embedding.initial_backoff_ms);
      bc.endpoint.timeout = std::chrono::seconds(cfg.embedding.timeout_s);
      bc.endpoint.cache_path = fs::path(bd_out).parent_path() / "embedding_cache.jsonl";
    }
    dataset::build_dataset(bc, bd_out);
    std::cerr << "wrote " << bc.counts.total() << " instances to " << bd_out << "\n";
    return 0;
  }

  if (*predict) {
    const auto model = costnet::load_weights(pr_weights);
    CostMap cost;
    if (!pr_dataset.empty()) {
      const auto ds = dataset::load_dataset(pr_dataset, false);
      const auto & inst = find_instance(ds, pr_instance);
      const auto emb = bench::model_embedding(ds, ds.instruction(inst.instruction_id), model.k());
      cost = model.predict(to_input_channels(inst.env), emb);
    } else {
      if (pr_map.empty() || pr_text.empty()) {
        throw Error(Errc::InvalidArgument, "predict needs --dataset/--instance or --map/--text");
      }
      const auto env = pgm::read_environment(pr_map, parse_kind(pr_map_kind));
      cost = model.predict(to_input_channels(env), text_embedding(pr_text, cfg, model.k()));
    }
    pgm::write_cost(pr_out, cost);
    return 0;
  }

  if (*plan_cmd) {
    PlannerParams params = cfg.planner;
    params.seed = cfg.seed;
    if (pl_nodes) {
      params.n_nodes = *pl_nodes;
    }
    std::optional<EnvironmentMap> env;
    std::optional<CostMap> cost;
    Point start;
    Point goal;
    if (!pl_dataset.empty()) {
      const auto ds = dataset::load_dataset(pl_dataset, false);
      const auto & inst = find_instance(ds, pl_instance);
      env = inst.env;
      start = inst.start;
      goal = inst.goal;
      const auto method = parse_methods({pl_method}).front();
      if (method == bench::Method::IgprmOracle) {
        cost = inst.gt_cost;
      } else if (method == bench::Method::PrmBaseline) {
        cost = zero_cost_like(inst.env);
      } else {
        if (pl_weights.empty()) {
          throw Error(Errc::MissingWeights, "igprm_learned needs --weights");
        }
        const auto model = costnet::load_weights(pl_weights);
        cost = model.predict(
          to_input_channels(inst.env), bench::model_embedding(ds, ds.instruction(inst.instruction_id), model.k()));
      }
    } else {
      if (pl_map.empty() || pl_start.empty() || pl_goal.empty()) {
        throw Error(Errc::InvalidArgument, "plan needs --dataset/--instance or --map/--start/--goal");
      }
      env = pgm::read_environment(pl_map, parse_kind(pl_map_kind));
      cost = pl_cost.empty() ? zero_cost_like(*env) : pgm::read_cost(pl_cost);
      start = parse_point(pl_start);
      goal = parse_point(pl_goal);
    }
    if (!pl_start.empty()) {
      start = parse_point(pl_start);
    }
    if (!pl_goal.empty()) {
      goal = parse_point(pl_goal);
    }
    const auto rm = build_roadmap(*env, *cost, start, goal, params);
    const auto path = shortest_path(rm, 0, 1);
    const std::string text = path_json(path).dump(2) + "\n";
    if (pl_out.empty()) {
      std::cout << text;
    } else {
      write_file(pl_out, text);
    }
    if (!pl_roadmap.empty()) {
      write_file(pl_roadmap, to_json(rm).dump() + "\n");
    }
    if (!path) {
      std::cerr << "no path between start and goal\n";
    }
    return 0;
  }

  if (*eval_cmd) {
    const auto ds = dataset::load_dataset(ev_dataset, false);
    const auto & inst = find_instance(ds, ev_instance);
    std::optional<std::vector<Point>> produced;
    try {
      produced = path_from_json(read_json_file(ev_path));
    } catch (const json::exception & e) {
      throw Error(Errc::InvalidArgument, ev_path + ": " + e.what());
    }
    std::cout << eval_json(metrics::evaluate(produced, inst.gt_path, inst.gt_cost)).dump(2) << "\n";
    return 0;
  }

  if (*bench_cmd) {
    const auto ds = dataset::load_dataset(bn_dataset, false);
    bench::BenchConfig bc;
    bc.methods = bn_methods.empty() ? cfg.bench.methods : parse_methods(bn_methods);
    bc.node_counts = bn_nodes.empty() ? cfg.bench.node_counts : parse_int_list(bn_nodes);
    bc.trials_per_instance = bn_trials.value_or(cfg.bench.trials_per_instance);
    bc.seed = cfg.seed;
    bc.planner = cfg.planner;
    bc.threads = cfg.bench.threads;
    std::unique_ptr<costnet::Model> model;
    if (!bn_weights.empty()) {
      model = std::make_unique<costnet::Model>(costnet::load_weights(bn_weights));
      bc.model = model.get();
    }
    write_report(bench::run_benchmark(ds, bc), bn_out, bn_summary);
    return 0;
  }

  if (*ablate) {
    const auto ds = dataset::load_dataset(ab_dataset, false);
    bench::AblationConfig ac;
    ac.dims = ab_dims.empty() ? cfg.ablation.dims : parse_int_list(ab_dims);
    ac.oracle_substitution = ab_oracle;
    ac.n_nodes = cfg.ablation.n_nodes;
    ac.trials_per_instance = cfg.ablation.trials_per_instance;
    ac.seed = cfg.seed;
    ac.planner = cfg.planner;
    ac.threads = cfg.bench.threads;
    std::vector<std::unique_ptr<costnet::Model>> models;
    for (const auto & w : ab_weights) {
      models.push_back(std::make_unique<costnet::Model>(costnet::load_weights(w)));
      ac.models[models.back()->k()] = models.back().get();
    }
    write_report(bench::run_ablation(ds, ac), ab_out, ab_summary);
    return 0;
  }

  if (*runtime) {
    const auto ds = dataset::load_dataset(rt_dataset, false);
    int id = rt_instance;
    if (id < 0) {
      for (const auto & inst : ds.instances) {
        if (inst.split == SplitTag::TestKnown || inst.split == SplitTag::TestUnknown) {
          id = inst.id;
          break;
        }
      }
    }
    const auto & inst = find_instance(ds, id);
    const auto model = costnet::load_weights(rt_weights);
    PlannerParams params = cfg.planner;
    params.seed = cfg.seed;
    const auto emb = bench::model_embedding(ds, ds.instruction(inst.instruction_id), model.k());
    const auto st = bench::measure_runtime(
      inst, emb, model, params, rt_nodes.value_or(cfg.runtime.n_nodes), rt_repeats.value_or(cfg.runtime.repeats));
    std::cout << json{
      {"instance_id", inst.id}, {"predict_ms", st.predict_ms}, {"plan_ms", st.plan_ms},
      {"n_nodes", st.n_nodes}, {"repeats", st.repeats}}.dump(2) << "\n";
    return 0;
  }

  if (*render_cmd) {
    std::optional<EnvironmentMap> env;
    Point start;
    Point goal;
    std::optional<std::vector<Point>> path;
    if (!rd_dataset.empty()) {
      const auto ds = dataset::load_dataset(rd_dataset, false);
      const auto & inst = find_instance(ds, rd_instance);
      env = inst.env;
      start = inst.start;
      goal = inst.goal;
      path = inst.gt_path;
    } else {
      if (rd_map.empty() || rd_start.empty() || rd_goal.empty()) {
        throw Error(Errc::InvalidArgument, "render needs --dataset/--instance or --map/--start/--goal");
      }
      env = pgm::read_environment(rd_map, parse_kind(rd_map_kind));
      start = parse_point(rd_start);
      goal = parse_point(rd_goal);
    }
    if (!rd_path.empty()) {
      path = path_from_json(read_json_file(rd_path));
    }
    std::optional<Roadmap> rm;
    if (!rd_roadmap.empty()) {
      const json j = read_json_file(rd_roadmap);
      try {
        rm.emplace();
        rm->params = planner_params_from_json(j.at("params"));
        for (const auto & n : j.at("nodes")) {
          rm->add_node({n.at(0).get<double>(), n.at(1).get<double>()});
        }
        for (const auto & e : j.at("edges")) {
          rm->add_edge(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>());
        }
      } catch (const json::exception & e) {
        throw Error(Errc::InvalidArgument, rd_roadmap + ": " + e.what());
      }
    }
    render::render_svg(*env, rm ? &*rm : nullptr, path ? &*path : nullptr, start, goal, rd_out);
    return 0;
  }

  return 0;
}

}  // namespace igprm::cli

int main(int argc, char ** argv)
{
  try {
    return igprm::cli::run(argc, argv);
  } catch (const igprm::Error & e) {
    std::cerr << "igprm: " << e.what() << "\n";
    return igprm::is_io_error(e.code()) ? igprm::cli::kExitIo : igprm::cli::kExitValidation;
  } catch (const std::filesystem::filesystem_error & e) {
    std::cerr << "igprm: " << e.what() << "\n";
    return igprm::cli::kExitIo;
  } catch (const std::exception & e) {
    std::cerr << "igprm: " << e.what() << "\n";
    return igprm::cli::kExitValidation;
  }
}
