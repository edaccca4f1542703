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


// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "binseeker/dataset.h"
#include "binseeker/kernels.h"

namespace binseeker {
namespace {

struct Workload {
  std::vector<FunctionRecord> corpus;
  std::vector<Lsfg> graphs;
  std::vector<LabeledPair> pairs;
  std::vector<std::size_t> batch;
  EmbedConfig cfg;
  ModelParams params;
  CalleeIndex callees;
  std::vector<const FunctionRecord*> functions;

  Workload() {
    CorpusSpec spec;
    spec.families = 40;
    spec.variants_per_family = 6;
    corpus = GenCorpus(spec);
    graphs = BuildLsfgs(corpus, ExecPolicy::kSerial);
    for (const PairRef& r : MakePairs(corpus, 1)) {
      pairs.push_back({&graphs[r.first], &graphs[r.second], r.label});
    }
    for (std::size_t i = 0; i < 64; ++i) batch.push_back(i);
    params = InitParams(cfg);
    callees.Add(corpus);
    for (const FunctionRecord& f : corpus) functions.push_back(&f);
  }
};

const Workload& Load() {
  static const Workload w;
  return w;
}

ExecPolicy PolicyOf(const benchmark::State& state) {
  return state.range(0) ? ExecPolicy::kParallel : ExecPolicy::kSerial;
}

void BM_BuildLsfgs(benchmark::State& state) {
  const Workload& w = Load();
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildLsfgs(w.corpus, PolicyOf(state)));
  }
  state.SetItemsProcessed(state.iterations() * w.corpus.size());
}

void BM_EmbedGraphs(benchmark::State& state) {
  const Workload& w = Load();
  for (auto _ : state) {
    benchmark::DoNotOptimize(EmbedGraphs(w.graphs, w.params, w.cfg, PolicyOf(state)));
  }
  state.SetItemsProcessed(state.iterations() * w.graphs.size());
}

void BM_BatchGradient(benchmark::State& state) {
  const Workload& w = Load();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ComputeBatchGradient(w.pairs, w.batch, w.params, w.cfg, PolicyOf(state)));
  }
  state.SetItemsProcessed(state.iterations() * w.batch.size());
}

void BM_PairSimilarities(benchmark::State& state) {
  const Workload& w = Load();
  for (auto _ : state) {
    benchmark::DoNotOptimize(PairSimilarities(w.pairs, w.params, w.cfg, PolicyOf(state)));
  }
  state.SetItemsProcessed(state.iterations() * w.pairs.size());
}

void BM_EmulateAll(benchmark::State& state) {
  const Workload& w = Load();
  const EmuConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(EmulateAll(w.functions, &w.callees, cfg, PolicyOf(state)));
  }
  state.SetItemsProcessed(state.iterations() * w.functions.size());
}

// Argument 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_BuildLsfgs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmbedGraphs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairSimilarities)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmulateAll)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace binseeker

BENCHMARK_MAIN();
