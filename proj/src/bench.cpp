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

#include "igprm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <tuple>

#include "igprm/error.hpp"
#include "igprm/parallel.hpp"
#include "igprm/seeding.hpp"

namespace igprm::bench
{

using Clock = std::chrono::steady_clock;

std::string_view to_string(Method m)
{
  switch (m) {
    case Method::IgprmLearned: return "igprm_learned";
    case Method::IgprmOracle: return "igprm_oracle";
    case Method::PrmBaseline: return "prm_baseline";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view s)
{
  for (auto m : {Method::IgprmLearned, Method::IgprmOracle, Method::PrmBaseline}) {
    if (to_string(m) == s) {
      return m;
    }
  }
  return std::nullopt;
}

std::uint64_t trial_seed(std::uint64_t seed, int instance_id, int trial, int n_nodes)
{
  return derive_seed(
    seed, {static_cast<std::uint64_t>(instance_id), static_cast<std::uint64_t>(trial),
      static_cast<std::uint64_t>(n_nodes)});
}

std::vector<float> model_embedding(const dataset::Dataset & ds, const InstructionRecord & instr, int k)
{
  if (k == ds.k && static_cast<int>(instr.projected.size()) == k) {
    return instr.projected;
  }
  return project(instr.embedding, make_projection(ds.projection_seed, k));
}

namespace
{

double elapsed_ms(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<const dataset::ProblemInstance *> select_instances(
  const dataset::Dataset & ds, const std::vector<SplitTag> & splits, const InstanceFilter & filter)
{
  std::vector<const dataset::ProblemInstance *> out;
  for (const auto & inst : ds.instances) {
    if (std::find(splits.begin(), splits.end(), inst.split) == splits.end()) {
      continue;
    }
    if (filter && !filter(inst, ds.instruction(inst.instruction_id))) {
      continue;
    }
    out.push_back(&inst);
  }
  return out;
}

Row run_one(
  const dataset::ProblemInstance & inst, const CostMap & cost, Method method, int n_nodes,
  int trial, int dim, InstructionClass cls, PlannerParams params, std::uint64_t seed)
{
  params.n_nodes = n_nodes;
  params.seed = trial_seed(seed, inst.id, trial, n_nodes);
  const auto t0 = Clock::now();
  const auto path = plan(inst.env, cost, inst.start, inst.goal, params);
  Row row;
  row.wall_clock_ms = elapsed_ms(t0);
  row.instance_id = inst.id;
  row.method = method;
  row.n_nodes = n_nodes;
  row.trial = trial;
  row.split = inst.split;
  row.cls = cls;
  row.dim = dim;
  std::optional<std::vector<Point>> pts;
  if (path) {
    pts = path->points;
  }
  row.eval = metrics::evaluate(pts, inst.gt_path, inst.gt_cost);
  return row;
}

using RowKey = std::tuple<int, int, int, int, int>;

RowKey row_key(const Row & r)
{
  return {r.instance_id, static_cast<int>(r.method), r.dim, r.n_nodes, r.trial};
}

}  // namespace

std::vector<Aggregate> aggregate(const std::vector<Row> & rows)
{
  using Key = std::tuple<int, int, int, int>;  // method, n_nodes, dim, split
  std::map<Key, std::vector<const Row *>> groups;
  for (const auto & r : rows) {
    groups[{static_cast<int>(r.method), r.n_nodes, r.dim, static_cast<int>(r.split)}].push_back(&r);
  }
  std::vector<Aggregate> out;
  for (const auto & [key, members] : groups) {
    Aggregate a;
    a.method = std::string(to_string(static_cast<Method>(std::get<0>(key))));
    a.n_nodes = std::get<1>(key);
    a.dim = std::get<2>(key);
    a.split = std::string(to_string(static_cast<SplitTag>(std::get<3>(key))));
    a.count = static_cast<int>(members.size());
    double spl_sum = 0.0;
    double dtw_sum = 0.0;
    int successes = 0;
    for (const Row * r : members) {
      spl_sum += r->eval.spl_term;
      successes += r->eval.success ? 1 : 0;
      if (!std::isnan(r->eval.dtw)) {
        dtw_sum += r->eval.dtw;
        ++a.dtw_count;
      }
    }
    a.mean_spl = spl_sum / a.count;
    a.success_rate = static_cast<double>(successes) / a.count;
    a.mean_dtw = a.dtw_count > 0 ? dtw_sum / a.dtw_count : std::numeric_limits<double>::quiet_NaN();
    out.push_back(std::move(a));
  }
  return out;
}

Report run_benchmark(const dataset::Dataset & ds, const BenchConfig & cfg)
{
  if (cfg.trials_per_instance < 1 || cfg.methods.empty() || cfg.node_counts.empty()) {
    throw Error(Errc::EmptyReport, "benchmark grid is empty");
  }
  const bool learned = std::find(cfg.methods.begin(), cfg.methods.end(), Method::IgprmLearned) !=
    cfg.methods.end();
  if (learned && cfg.model == nullptr) {
    throw Error(Errc::MissingWeights, "igprm_learned needs a weight file");
  }
  cfg.planner.validate();
  const auto selected = select_instances(ds, cfg.splits, cfg.filter);
  if (selected.empty()) {
    throw Error(Errc::EmptyReport, "no instances match the requested splits");
  }

  std::vector<std::vector<Row>> per_instance(selected.size());
  parallel_for(
    static_cast<int>(selected.size()), cfg.threads, [&](int i) {
      const auto & inst = *selected[i];
      const auto & instr = ds.instruction(inst.instruction_id);
      const CostMap zero = zero_cost_like(inst.env);
      std::optional<CostMap> predicted;
      if (learned) {
        predicted = cfg.model->predict(
          to_input_channels(inst.env), model_embedding(ds, instr, cfg.model->k()));
      }
      for (Method m : cfg.methods) {
        const CostMap & cost = m == Method::PrmBaseline ? zero :
        m == Method::IgprmOracle ? inst.gt_cost : *predicted;
        const int dim = m == Method::IgprmLearned ? cfg.model->k() : 0;
        for (int n : cfg.node_counts) {
          for (int t = 0; t < cfg.trials_per_instance; ++t) {
            per_instance[i].push_back(run_one(inst, cost, m, n, t, dim, instr.cls, cfg.planner, cfg.seed));
          }
        }
      }
    });

  Report rep;
  for (auto & rows : per_instance) {
    rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const Row & a, const Row & b) {return row_key(a) < row_key(b);});
  rep.aggregates = aggregate(rep.rows);
  return rep;
}

Report run_ablation(const dataset::Dataset & ds, const AblationConfig & cfg)
{
  if (cfg.dims.empty() || cfg.trials_per_instance < 1) {
    throw Error(Errc::EmptyReport, "ablation grid is empty");
  }
  if (!cfg.oracle_substitution) {
    for (int d : cfg.dims) {
      auto it = cfg.models.find(d);
      if (it == cfg.models.end() || it->second == nullptr) {
        throw Error(Errc::MissingWeights, "no weight file for embedding dimension " + std::to_string(d));
      }
      if (it->second->k() != d) {
        throw Error(Errc::DimensionMismatch, "weight file for dimension " + std::to_string(d) + " has k=" + std::to_string(it->second->k()));
      }
    }
  }
  cfg.planner.validate();
  const auto selected = select_instances(ds, {SplitTag::TestKnown, SplitTag::TestUnknown}, cfg.filter);
  if (selected.empty()) {
    throw Error(Errc::EmptyReport, "no test instances");
  }
  const Method method = cfg.oracle_substitution ? Method::IgprmOracle : Method::IgprmLearned;

  std::vector<std::vector<Row>> per_instance(selected.size());
  parallel_for(
    static_cast<int>(selected.size()), cfg.threads, [&](int i) {
      const auto & inst = *selected[i];
      const auto & instr = ds.instruction(inst.instruction_id);
      const auto channels = to_input_channels(inst.env);
      for (int d : cfg.dims) {
        CostMap cost = inst.gt_cost;
        if (!cfg.oracle_substitution) {
          const auto & model = *cfg.models.at(d);
          cost = model.predict(channels, model_embedding(ds, instr, d));
        }
        for (int t = 0; t < cfg.trials_per_instance; ++t) {
          per_instance[i].push_back(run_one(inst, cost, method, cfg.n_nodes, t, d, instr.cls, cfg.planner, cfg.seed));
        }
      }
    });

  Report rep;
  for (auto & rows : per_instance) {
    rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const Row & a, const Row & b) {return row_key(a) < row_key(b);});
  rep.aggregates = aggregate(rep.rows);
  return rep;
}

RuntimeStats measure_runtime(
  const dataset::ProblemInstance & inst, std::span<const float> embedding,
  const costnet::Model & model, PlannerParams planner, int n_nodes, int repeats)
{
  if (repeats < 1) {
    throw Error(Errc::InvalidArgument, "repeats must be >= 1");
  }
  RuntimeStats st;
  st.repeats = repeats;
  st.n_nodes = n_nodes;
  planner.n_nodes = n_nodes;
  double predict_total = 0.0;
  double plan_total = 0.0;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    const CostMap cost = model.predict(to_input_channels(inst.env), embedding);
    predict_total += elapsed_ms(t0);

    planner.seed = derive_seed(planner.seed, {static_cast<std::uint64_t>(r)});
    t0 = Clock::now();
    const auto path = plan(inst.env, cost, inst.start, inst.goal, planner);
    plan_total += elapsed_ms(t0);
    (void)path;
  }
  st.predict_ms = predict_total / repeats;
  st.plan_ms = plan_total / repeats;
  return st;
}

namespace
{

std::string num(double v)
{
  if (std::isnan(v)) {
    return "nan";
  }
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

}  // namespace

void write_rows_csv(std::ostream & out, const std::vector<Row> & rows)
{
  out << "instance_id,method,n_nodes,success,spl_term,dtw,produced_length,hidden_cost,wall_clock_ms,"
    "split,trial,dim,cls\n";
  for (const auto & r : rows) {
    out << r.instance_id << ',' << to_string(r.method) << ',' << r.n_nodes << ','
        << (r.eval.success ? 1 : 0) << ',' << num(r.eval.spl_term) << ',' << num(r.eval.dtw) << ','
        << num(r.eval.produced_length) << ',' << num(r.eval.hidden_cost) << ','
        << num(r.wall_clock_ms) << ',' << to_string(r.split) << ',' << r.trial << ',' << r.dim
        << ',' << igprm::to_string(r.cls) << '\n';
  }
}

void write_aggregates_csv(std::ostream & out, const std::vector<Aggregate> & aggs)
{
  out << "method,n_nodes,dim,split,count,success_rate,mean_spl,mean_dtw\n";
  for (const auto & a : aggs) {
    out << a.method << ',' << a.n_nodes << ',' << a.dim << ',' << a.split << ',' << a.count << ','
        << num(a.success_rate) << ',' << num(a.mean_spl) << ',' << num(a.mean_dtw) << '\n';
  }
}

std::vector<Row> read_rows_csv(std::istream & in)
{
  std::vector<Row> rows;
  std::string line;
  if (!std::getline(in, line)) {
    return rows;
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      f.push_back(cell);
    }
    if (f.size() != 13) {
      throw Error(Errc::IoError, "malformed CSV row: " + line);
    }
    Row r;
    r.instance_id = std::stoi(f[0]);
    auto m = parse_method(f[1]);
    auto split = parse_split_tag(f[9]);
    auto cls = parse_instruction_class(f[12]);
    if (!m || !split || !cls) {
      throw Error(Errc::IoError, "unknown method, split or class in CSV row: " + line);
    }
    r.method = *m;
    r.n_nodes = std::stoi(f[2]);
    r.eval.success = f[3] == "1";
    r.eval.spl_term = std::strtod(f[4].c_str(), nullptr);
    r.eval.dtw = std::strtod(f[5].c_str(), nullptr);
    r.eval.produced_length = std::strtod(f[6].c_str(), nullptr);
    r.eval.hidden_cost = std::strtod(f[7].c_str(), nullptr);
    r.wall_clock_ms = std::strtod(f[8].c_str(), nullptr);
    r.split = *split;
    r.trial = std::stoi(f[10]);
    r.dim = std::stoi(f[11]);
    r.cls = *cls;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace igprm::bench
