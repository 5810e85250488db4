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

// Acceptance harness: one PASS/FAIL line per criterion; exit status is
// nonzero when any primary criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "floor_plan.hpp"
#include "igprm/bench.hpp"
#include "igprm/costnet.hpp"
#include "igprm/dataset.hpp"
#include "igprm/instructions.hpp"
#include "igprm/metrics.hpp"
#include "igprm/planner.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace igprm;
using Clock = std::chrono::steady_clock;

namespace
{

int g_primary_failures = 0;

void report(int id, bool primary, bool pass, const std::string & name, const std::string & detail)
{
  std::printf(
    "[%s] %d %s%s: %s\n", pass ? "PASS" : "FAIL", id, primary ? "" : "(secondary) ",
    name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (primary && !pass) {
    ++g_primary_failures;
  }
}

std::string fmt(const char * f, double a = 0, double b = 0, double c = 0, double d = 0)
{
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_prefer(InstructionClass c)
{
  return c == InstructionClass::PreferNarrow || c == InstructionClass::PreferWide;
}

struct SynthData
{
  dataset::Dataset ds;
  /// First 100 test instances carrying a PREFER_* instruction.
  std::set<int> prefer_ids;
};

SynthData build_synthetic(const std::filesystem::path & dir)
{
  dataset::BuildConfig cfg;
  cfg.counts = {20, 10, 170};
  cfg.seed = 2026;
  cfg.k = 16;
  dataset::build_dataset(cfg, dir);
  SynthData out{dataset::load_dataset(dir), {}};
  for (const auto & inst : out.ds.instances) {
    const bool test = inst.split == SplitTag::TestKnown || inst.split == SplitTag::TestUnknown;
    if (test && is_prefer(out.ds.instruction(inst.instruction_id).cls) && out.prefer_ids.size() < 100) {
      out.prefer_ids.insert(inst.id);
    }
  }
  return out;
}

bench::InstanceFilter only(const std::set<int> & ids)
{
  return [&ids](const dataset::ProblemInstance & inst, const InstructionRecord &) {
           return ids.count(inst.id) > 0;
         };
}

struct Cell
{
  double spl = 0.0;
  double dtw = 0.0;
  double success = 0.0;
};

/// Means per (method, n) pooled over splits; DTW over rows with a path.
Cell pooled(const std::vector<bench::Row> & rows, bench::Method m, int n)
{
  Cell c;
  int count = 0;
  int dtw_count = 0;
  for (const auto & r : rows) {
    if (r.method != m || r.n_nodes != n) {
      continue;
    }
    ++count;
    c.spl += r.eval.spl_term;
    c.success += r.eval.success ? 1.0 : 0.0;
    if (!std::isnan(r.eval.dtw)) {
      c.dtw += r.eval.dtw;
      ++dtw_count;
    }
  }
  c.spl /= std::max(count, 1);
  c.success /= std::max(count, 1);
  c.dtw = dtw_count > 0 ? c.dtw / dtw_count : std::nan("");
  return c;
}

void criterion_1(const SynthData & d)
{
  bench::BenchConfig cfg;
  cfg.seed = 1;
  cfg.threads = 1;
  cfg.filter = only(d.prefer_ids);
  const auto t0 = Clock::now();
  const auto rep = bench::run_benchmark(d.ds, cfg);
  const double secs = seconds_since(t0);
  bool pass = d.prefer_ids.size() == 100 && secs <= 600.0;
  std::string detail = fmt("%g instances, %.1f s;", static_cast<double>(d.prefer_ids.size()), secs);
  for (int n : {50, 150, 300}) {
    const Cell o = pooled(rep.rows, bench::Method::IgprmOracle, n);
    const Cell b = pooled(rep.rows, bench::Method::PrmBaseline, n);
    pass = pass && o.spl > b.spl && o.dtw < b.dtw;
    detail += fmt(" n=%g SPL %.3f vs %.3f, DTW %.1f", n, o.spl, b.spl, o.dtw) + fmt(" vs %.1f;", b.dtw);
    if (n == 300) {
      pass = pass && o.success >= 0.9;
      detail += fmt(" oracle success@300 %.3f", o.success);
    }
  }
  report(1, true, pass, "oracle separation", detail);
}

void criterion_2(const SynthData & d)
{
  bench::BenchConfig cfg;
  cfg.seed = 2;
  cfg.trials_per_instance = 5;
  cfg.filter = only(d.prefer_ids);
  const auto rep = bench::run_benchmark(d.ds, cfg);
  bool pass = true;
  std::string detail;
  for (auto m : {bench::Method::IgprmOracle, bench::Method::PrmBaseline}) {
    const double s50 = pooled(rep.rows, m, 50).success;
    const double s150 = pooled(rep.rows, m, 150).success;
    const double s300 = pooled(rep.rows, m, 300).success;
    pass = pass && s150 >= s50 - 0.05 && s300 >= s150 - 0.05;
    detail += std::string(bench::to_string(m)) + fmt(" %.3f/%.3f/%.3f; ", s50, s150, s300);
  }
  report(2, true, pass, "completeness trend", detail + "100 instances x 5 seeds");
}

void criterion_3()
{
  std::mt19937_64 rng(303);
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto rm = oracle::random_graph(rng, n);
    const int s = static_cast<int>(rng() % n);
    const int g = static_cast<int>(rng() % n);
    const auto best = oracle::enumerate_paths(rm, s, g);
    const auto got = shortest_path(rm, s, g);
    const bool ok = std::isinf(best.cost) ?
      !got.has_value() :
      (got.has_value() && got->total_cost == best.cost && got->node_ids == best.nodes);
    agree += ok;
  }
  report(3, true, agree == 200, "Dijkstra vs enumeration", fmt("%g/200 graphs agree exactly", agree));
}

void criterion_4()
{
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Point> a(1 + rng() % 6);
    std::vector<Point> b(1 + rng() % 6);
    for (auto & p : a) {
      p = {u(rng), u(rng)};
    }
    for (auto & p : b) {
      p = {u(rng), u(rng)};
    }
    worst = std::max(worst, std::abs(metrics::dtw(a, b) - oracle::dtw_bruteforce(a, b)));
  }
  report(4, true, worst <= 1e-9, "DTW vs brute force", fmt("max abs diff %.3g over 200 pairs", worst));
}

void criterion_5()
{
  EnvironmentMap env(64, 64, MapKind::Synthetic);
  CostMap cost(64, 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 32; ++x) {
      cost.set(x, y, 1.0f);
    }
  }
  PlannerParams p;
  p.epsilon = 0.1;
  p.uniform_mix = 0.0;
  p.n_nodes = 20000;
  p.seed = 505;
  const auto r = sample_nodes(cost, env, p);
  const auto low = std::count_if(r.nodes.begin(), r.nodes.end(), [](Point q) {return q.x >= 32.0;});
  const double share = static_cast<double>(low) / static_cast<double>(r.nodes.size());
  const bool pass = r.nodes.size() == 20000 && share >= 0.90 && share <= 0.93;
  report(5, true, pass, "sampling bias", fmt("low-cost share %.4f (expected %.4f)", share, 1.0 / (1.0 + 0.1 / 1.1)));
}

void criterion_6()
{
  const auto m = make_projection(606, 128);
  // independent of the matrix stream; sharing its seed would replay the rows
  std::mt19937_64 rng(6060);
  std::normal_distribution<double> g;
  auto unit = [&] {
      std::vector<float> v(kEmbeddingDim);
      double norm = 0.0;
      std::vector<double> d(kEmbeddingDim);
      for (auto & x : d) {
        x = g(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < d.size(); ++i) {
        v[i] = static_cast<float>(d[i] / norm);
      }
      return v;
    };
  int inside = 0;
  for (int i = 0; i < 100; ++i) {
    const auto a = unit();
    const auto b = unit();
    const auto pa = project(a, m);
    const auto pb = project(b, m);
    double orig = 0.0;
    double proj = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      orig += (static_cast<double>(a[j]) - b[j]) * (static_cast<double>(a[j]) - b[j]);
    }
    for (std::size_t j = 0; j < pa.size(); ++j) {
      proj += (static_cast<double>(pa[j]) - pb[j]) * (static_cast<double>(pa[j]) - pb[j]);
    }
    const double ratio = std::sqrt(proj / orig);
    inside += ratio >= 0.5 && ratio <= 1.5;
  }
  report(6, true, inside >= 95, "JL projection", fmt("%g/100 ratios in [0.5, 1.5] at k=128", inside));
}

void criterion_7(const SynthData & d)
{
  const auto model = costnet::load_weights(std::filesystem::path(IGPRM_TEST_DATA_DIR) / "weights_k16.igpw");
  const auto & inst = d.ds.instances.at(static_cast<std::size_t>(*d.prefer_ids.begin()));
  const auto emb = bench::model_embedding(d.ds, d.ds.instruction(inst.instruction_id), 16);
  const auto stats = bench::measure_runtime(inst, emb, model, PlannerParams{}, 300, 100);
  const bool pass = stats.predict_ms <= 1000.0 && stats.plan_ms <= 2000.0;
  report(
    7, true, pass, "desk-scale runtime",
    fmt("predict %.1f ms, plan@300 %.1f ms (mean of 100, 64x64, k=16)", stats.predict_ms, stats.plan_ms));
}

void criterion_8(const SynthData & d, const std::filesystem::path & tmp)
{
  dataset::BuildConfig cfg;
  cfg.kind = MapKind::Indoor;
  cfg.counts = {20, 10, 20};
  cfg.seed = 808;
  cfg.indoor_sources = {oracle::write_floor_plan(tmp)};
  dataset::build_dataset(cfg, tmp / "indoor");
  const auto indoor = dataset::load_dataset(tmp / "indoor");
  int total = 0;
  int ok = 0;
  for (const auto * ds : {&d.ds, &indoor}) {
    for (const auto & inst : ds->instances) {
      ++total;
      ok += metrics::check_success(inst.gt_path, inst.gt_cost) && inst.gt_path.front() == inst.start &&
        inst.gt_path.back() == inst.goal;
    }
  }
  report(8, true, ok == total, "ground-truth self-consistency", fmt("%g/%g stored paths succeed (synthetic + indoor)", ok, total));
}

void criterion_9()
{
  double worst = 0.0;
  for (int k : {8, 16}) {
    const std::filesystem::path dir(IGPRM_TEST_DATA_DIR);
    const auto model = costnet::load_weights(dir / ("weights_k" + std::to_string(k) + ".igpw"));
    const auto fx = costnet::read_container(dir / ("parity_k" + std::to_string(k) + ".igpw"));
    const ChannelStack ch{64, 64, fx.find("parity_input")->data};
    const auto got = model.forward(ch, fx.find("parity_embedding")->data);
    const auto & want = fx.find("parity_output")->data;
    for (std::size_t i = 0; i < got.size(); ++i) {
      worst = std::max(worst, static_cast<double>(std::abs(got[i] - want[i])));
    }
  }
  report(9, false, worst <= 1e-4, "forward parity", fmt("max abs diff %.3g for k in {8, 16}", worst));
}

}  // namespace

int main()
{
  try {
    const test::TempDir tmp;
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    const auto synth = build_synthetic(tmp / "synthetic");
    criterion_1(synth);
    criterion_2(synth);
    criterion_7(synth);
    criterion_8(synth, tmp.path());
    criterion_9();
    std::printf("[SKIP] 10 (secondary) learned-model quality: needs a trained checkpoint; not evaluated here\n");
  } catch (const std::exception & e) {
    std::printf("[FAIL] harness error: %s\n", e.what());
    return 1;
  }
  std::printf("%d primary criteria failed\n", g_primary_failures);
  return g_primary_failures == 0 ? 0 : 1;
}
