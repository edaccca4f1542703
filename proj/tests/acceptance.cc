// Copyright 2026 The BinSeeker Authors. All Rights Reserved.
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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "binseeker/dataset.h"
#include "binseeker/embed.h"
#include "binseeker/emulator.h"
#include "binseeker/eval.h"
#include "binseeker/experiments.h"
#include "binseeker/func_model.h"
#include "binseeker/kernels.h"
#include "binseeker/lsfg.h"
#include "binseeker/pipeline.h"
#include "oracles.h"
#include "test_support.h"

namespace binseeker {
namespace {

using testing::TestRng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Outcome GradientCorrectness() {
  TestRng rng(101);
  double worst = 0.0;
  int graphs = 0;
  for (int i = 0; i < 60; ++i) {
    EmbedConfig cfg;
    cfg.iterations = rng.Int(1, 3);
    cfg.embedding_size = rng.Int(1, 4);
    cfg.depth = rng.Int(1, 2);
    const Lsfg a = testing::RandomLsfg(rng, 6, 3);
    const Lsfg b = testing::RandomLsfg(rng, 6, 3);
    const ModelParams m = testing::RandomParams(rng, cfg, 0.4);
    const LabeledPair pair{&a, &b, rng.Chance(0.5) ? 1 : -1};
    worst = std::max(worst, testing::GradientCheckError(pair, m, cfg));
    ++graphs;
  }
  return {worst <= 1e-4, std::to_string(graphs) + " pairs, worst relative error " +
                             Num(worst) + " (limit 1e-4)"};
}

Outcome EmbeddingOracle() {
  TestRng rng(102);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    EmbedConfig cfg;
    cfg.iterations = rng.Int(1, 6);
    cfg.embedding_size = rng.Int(1, 16);
    cfg.depth = rng.Int(1, 3);
    const Lsfg g = testing::RandomLsfg(rng, 10);
    const ModelParams m = testing::RandomParams(rng, cfg, 0.5);
    const RowVector got = Embed(g, m, cfg);
    const testing::Vec want = testing::OracleEmbed(g, m, cfg.iterations);
    for (int k = 0; k < cfg.embedding_size; ++k) {
      worst = std::max(worst, std::abs(got(k) - want[k]));
    }
  }
  return {worst <= 1e-12,
          "100 graphs, max deviation " + Num(worst) + " (limit 1e-12)"};
}

Outcome DfgOracle() {
  TestRng rng(103);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const FunctionRecord f =
        testing::RandomDataflowFunction(rng, 8, i % 2 ? "beta" : "alpha");
    const ArchProfile& p = ProfileFor(f.arch);
    if (InferDfg(f, p) != testing::OracleDfg(f, p)) ++mismatches;
  }
  return {mismatches == 0, "200 functions, " + std::to_string(mismatches) + " mismatches"};
}

CrossValidationConfig LearningConfig() {
  CrossValidationConfig cfg;
  cfg.folds = 10;
  cfg.embed.epochs = 50;
  return cfg;
}

std::vector<FunctionRecord> LearningCorpus() {
  CorpusSpec spec;
  spec.families = 20;
  spec.variants_per_family = 6;
  spec.seed = 1;
  return GenCorpus(spec);
}

Outcome LearningQuality(const AblationRow& lsfg, double seconds) {
  std::string per_fold;
  for (const FoldOutcome& f : lsfg.result.folds) per_fold += " " + Num(f.auc);
  return {lsfg.result.mean_auc >= 0.85,
          "mean held-out AUC " + Num(lsfg.result.mean_auc) + " (limit 0.85), folds" +
              per_fold + ", " + Num(seconds) + " s for all variants"};
}

Outcome AblationDirection(const std::vector<AblationRow>& rows) {
  const double lsfg = rows[0].result.mean_auc;
  const double cfg_only = rows[1].result.mean_auc;
  const double dfg_only = rows[2].result.mean_auc;
  const bool pass = lsfg >= cfg_only - 0.005 && lsfg >= dfg_only - 0.005;
  return {pass, "lsfg " + Num(lsfg) + ", cfg-only " + Num(cfg_only) +
                    ", dfg-only " + Num(dfg_only) + " (ties within 0.005)"};
}

Outcome EndToEndSearch() {
  const auto start = std::chrono::steady_clock::now();
  // Trained on a corpus generated independently of the benchmark.
  CorpusSpec train_spec;
  train_spec.families = 20;
  train_spec.variants_per_family = 6;
  train_spec.seed = 2;
  const auto train_corpus = GenCorpus(train_spec);
  const auto graphs = BuildLsfgs(train_corpus);
  std::vector<LabeledPair> pairs;
  for (const PairRef& r : MakePairs(train_corpus, 1)) {
    pairs.push_back({&graphs[r.first], &graphs[r.second], r.label});
  }
  Model model;
  model.cfg.epochs = 50;
  model.params = Train(pairs, {}, model.cfg).params;

  const Benchmark bench = BuildBenchmark(BenchmarkSpec{});
  PipelineConfig cfg;
  cfg.m = 200;
  cfg.n = 25;
  SignatureStore store;
  const EmbeddingIndex index = EmbedCorpus(bench.corpus, model);
  std::vector<QueryRank> two_stage, learning;
  for (const FunctionRecord& q : bench.queries) {
    const SearchResult r =
        Search(q, bench.corpus, index, model, cfg, &store, bench.queries);
    const std::string& clone = bench.clone_of.at(q.id);
    two_stage.push_back(RankOf(r.results, clone));
    learning.push_back(RankOf(r.candidates, clone));
  }
  const int hits = TopkHits(two_stage, cfg.n).hits;
  const double mrr2 = Mrr(two_stage);
  const double mrr1 = Mrr(learning);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string ranks;
  for (int r : two_stage) ranks += " " + std::to_string(r);
  return {hits == 15 && mrr2 >= mrr1,
          std::to_string(hits) + "/15 in top-25, two-stage MRR " + Num(mrr2) +
              ", learning-only MRR " + Num(mrr1) + ", ranks" + ranks + ", " +
              Num(seconds) + " s"};
}

FunctionRecord Executable(const std::string& id,
                          std::vector<std::pair<std::string, std::vector<MicroOp>>> blocks,
                          std::vector<CfgEdge> edges) {
  FunctionRecord f;
  f.id = id;
  f.arch = "alpha";
  f.entry = blocks.front().first;
  for (auto& [bid, ops] : blocks) {
    BasicBlock b;
    b.id = bid;
    for (const MicroOp& op : ops) {
      Instruction ins;
      ins.mnemonic = op.kind == UopKind::kCall ? "call" : "mov";
      if (op.kind == UopKind::kCall) ins.operands = {op.callee};
      ins.uops = std::vector<MicroOp>{op};
      b.instructions.push_back(ins);
    }
    f.blocks.push_back(b);
  }
  f.cfg_edges = std::move(edges);
  ValidateFunction(f);
  return f;
}

Outcome EmulatorRobustness() {
  std::vector<FunctionRecord> fns;
  fns.push_back(Executable(
      "spin",
      {{"a", {MicroOp::Const("ebx", 0), MicroOp::Jump("h")}},
       {"h", {MicroOp::Binop(BinopKind::kAdd, "ebx", "ebx", "#1"),
              MicroOp::Cmp(CmpKind::kEq, "esi", "ebx", "ebx"),
              MicroOp::CondBranch("esi", "h", "h")}}},
      {{"a", "h"}, {"h", "h"}}));
  fns.push_back(Executable(
      "ping", {{"a", {MicroOp::Call("puts", true), MicroOp::Call("pong", false),
                      MicroOp::Ret("eax")}}},
      {}));
  fns.push_back(Executable(
      "pong", {{"a", {MicroOp::Call("ping", false), MicroOp::Ret("eax")}}}, {}));
  fns.push_back(Executable(
      "divzero",
      {{"a", {MicroOp::Const("ebx", 9), MicroOp::Const("esi", 0),
              MicroOp::Binop(BinopKind::kDiv, "edi", "ebx", "esi"),
              MicroOp::Store("@8192", "edi", Region::kData), MicroOp::Ret("edi")}}},
      {}));
  fns.push_back(Executable(
      "noargs", {{"a", {MicroOp::Const("ebx", 3), MicroOp::Ret("ebx")}}}, {}));
  const CalleeIndex index(fns);
  const EmuConfig cfg;
  bool ok = true;
  std::string detail;
  for (const FunctionRecord& f : fns) {
    const EmulationResult a = Emulate(f, &index, cfg);
    const EmulationResult b = Emulate(f, &index, cfg);
    const bool same = SerializeSignature(a.signature) == SerializeSignature(b.signature) &&
                      a.steps == b.steps;
    ok = ok && same && a.steps <= cfg.step_budget;
    detail += f.id + " " + std::to_string(a.steps) + " steps" + (same ? "" : " (differs)") + ", ";
  }
  ok = ok && RecognizeArgs(fns.back(), AlphaProfile()).size() == 0;
  return {ok, detail + "budget " + std::to_string(cfg.step_budget)};
}

Outcome MetricCorrectness() {
  const std::vector<QueryRank> small = {1, 2, 4};
  const std::vector<QueryRank> published = {1, 1, 1, 1, 2, 4, 2, 5, 12, 1, 2, 2, 1, 5, 1};
  const double m1 = Mrr(small);
  const double m2 = Mrr(published);
  TestRng rng(108);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<ScoredPair> pairs = {{rng.Uniform(0, 1), 1}, {rng.Uniform(0, 1), -1}};
    const int n = rng.Int(0, 60);
    for (int k = 0; k < n; ++k) {
      pairs.push_back({rng.Int(0, 10) / 10.0, rng.Chance(0.5) ? 1 : -1});
    }
    if (std::abs(RocAuc(pairs).auc - testing::OracleAuc(pairs)) > 1e-12) ++mismatches;
  }
  const bool pass = std::abs(m1 - 7.0 / 12.0) <= 1e-9 &&
                    std::abs(m1 - 0.58333) <= 5e-6 && std::abs(m2 - 0.65) <= 0.005 &&
                    mismatches == 0;
  return {pass, "mrr([1,2,4]) " + Num(m1) + ", published column " + Num(m2) +
                    ", AUC mismatches " + std::to_string(mismatches) + "/100"};
}

Outcome FormatRoundTrips() {
  TestRng rng(109);
  const int cases = 1000;
  int bad_functions = 0, bad_models = 0, bad_sigs = 0;
  for (int i = 0; i < cases; ++i) {
    std::vector<FunctionRecord> doc;
    const int n = rng.Int(0, 3);
    for (int k = 0; k < n; ++k) doc.push_back(testing::RandomValidFunction(rng, 3 * i + k));
    const std::string text = SerializeFunctions(doc);
    const auto back = ParseFunctionFile(text);
    if (back != doc || SerializeFunctions(back) != text) ++bad_functions;

    EmbedConfig cfg;
    cfg.iterations = rng.Int(1, 8);
    cfg.embedding_size = rng.Int(1, 6);
    cfg.depth = rng.Int(1, 3);
    cfg.learning_rate = rng.Uniform(0, 1) * std::pow(10.0, -rng.Int(0, 8));
    cfg.epochs = rng.Int(0, 500);
    cfg.batch_size = rng.Int(1, 64);
    cfg.seed = static_cast<std::uint64_t>(rng.Int64(0, INT64_MAX));
    const ModelParams m =
        testing::RandomParams(rng, cfg, std::pow(10.0, rng.Int(-6, 6)));
    const std::string mt = SerializeModel(cfg, m);
    const Model mb = ParseModel(mt);
    if (!(mb.cfg == cfg) || !(mb.params == m) ||
        SerializeModel(mb.cfg, mb.params) != mt) {
      ++bad_models;
    }

    Signature s;
    const int ne = rng.Int(0, 20);
    for (int k = 0; k < ne; ++k) {
      switch (rng.Int(0, 3)) {
        case 0: s.events.push_back(SignatureEvent::Input(rng.Int64(INT64_MIN / 2, INT64_MAX / 2))); break;
        case 1: s.events.push_back(SignatureEvent::Output(rng.Int64(INT32_MIN, INT32_MAX))); break;
        case 2:
          s.events.push_back(SignatureEvent::Compare(
              rng.Int(-1000, 1000), rng.Int(-1000, 1000),
              rng.Pick(std::vector<std::string>{"eq", "ne", "lt", "le", "gt", "ge"})));
          break;
        default: s.events.push_back(SignatureEvent::LibCall(rng.Pick(LibraryFunctions())));
      }
    }
    const std::string st = SerializeSignature(s);
    const Signature sb = ParseSignature(st);
    if (!(sb == s) || SerializeSignature(sb) != st) ++bad_sigs;
  }
  return {bad_functions == 0 && bad_models == 0 && bad_sigs == 0,
          std::to_string(cases) + " cases each; failures: interchange " +
              std::to_string(bad_functions) + ", model " + std::to_string(bad_models) +
              ", signature " + std::to_string(bad_sigs)};
}

template <typename F>
Outcome Timed(F&& f, double* seconds) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return o;
}

int Report(int id, const std::string& name, const Outcome& o) {
  std::printf("criterion %d %s: %s  %s\n", id, name.c_str(), o.pass ? "PASS" : "FAIL",
              o.detail.c_str());
  std::fflush(stdout);
  return o.pass ? 0 : 1;
}

int Main() {
  int failures = 0;
  double secs = 0.0;
  Outcome o = Timed(GradientCorrectness, &secs);
  o.detail += ", " + Num(secs) + " s";
  if (secs >= 60) o.pass = false;
  failures += Report(1, "gradient-check", o);
  failures += Report(2, "embedding-oracle", Timed(EmbeddingOracle, &secs));
  failures += Report(3, "dfg-oracle", Timed(DfgOracle, &secs));

  std::vector<AblationRow> rows;
  double ablation_secs = 0.0;
  const Outcome run = Timed(
      [&] {
        const auto corpus = LearningCorpus();
        const auto variants = DefaultAblationVariants();
        rows = AblationRun(corpus, variants, LearningConfig());
        return Outcome{true, ""};
      },
      &ablation_secs);
  if (!run.pass) {
    failures += Report(4, "learning-auc", run);
    failures += Report(5, "ablation-order", run);
  } else {
    failures += Report(4, "learning-auc", LearningQuality(rows[0], ablation_secs));
    failures += Report(5, "ablation-order", AblationDirection(rows));
  }

  o = Timed(EndToEndSearch, &secs);
  if (secs >= 600) o.pass = false;
  failures += Report(6, "end-to-end-search", o);
  failures += Report(7, "emulator-robustness", Timed(EmulatorRobustness, &secs));
  failures += Report(8, "metrics", Timed(MetricCorrectness, &secs));
  failures += Report(9, "format-round-trips", Timed(FormatRoundTrips, &secs));
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace binseeker

int main() { return binseeker::Main(); }
