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


#include "binseeker/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "binseeker/error.h"
#include "binseeker/eval.h"

namespace binseeker {
namespace {

constexpr std::uint64_t kTestPairSalt = 0x7e57ULL;

int FamilyCount(std::span<const FunctionRecord> records) {
  std::map<std::string, int> keys;
  for (const FunctionRecord& f : records) ++keys[f.source_key.value_or("")];
  return static_cast<int>(keys.size());
}

std::vector<LabeledPair> Bind(std::span<const FunctionRecord> subset,
                              std::span<const PairRef> pairs,
                              const std::map<std::string, const Lsfg*>& graphs) {
  std::vector<LabeledPair> out;
  out.reserve(pairs.size());
  for (const PairRef& p : pairs) {
    out.push_back({graphs.at(subset[p.first].id), graphs.at(subset[p.second].id),
                   p.label});
  }
  return out;
}

}  // namespace

CrossValidationResult CrossValidate(std::span<const FunctionRecord> corpus,
                                    const CrossValidationConfig& cfg) {
  cfg.embed.Validate();
  const FoldPlan plan = FoldSplit(corpus, cfg.folds, cfg.fold_seed);
  std::vector<Lsfg> graphs = BuildLsfgs(corpus, cfg.policy);
  std::map<std::string, const Lsfg*> by_id;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    graphs[i] = ApplyVariant(std::move(graphs[i]), cfg.graph, cfg.features);
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) by_id[corpus[i].id] = &graphs[i];

  const int limit =
      cfg.max_folds > 0 ? std::min(cfg.max_folds, cfg.folds) : cfg.folds;
  CrossValidationResult result;
  std::vector<ScoredPair> pooled;
  double sum = 0.0;
  int defined = 0;
  for (int fold = 0; fold < limit; ++fold) {
    const std::vector<FunctionRecord> train = SelectFold(corpus, plan, fold, false);
    const std::vector<FunctionRecord> test = SelectFold(corpus, plan, fold, true);
    const std::vector<PairRef> train_refs =
        MakePairs(train, cfg.pair_seed + static_cast<std::uint64_t>(fold));
    const std::vector<LabeledPair> train_pairs = Bind(train, train_refs, by_id);
    std::vector<LabeledPair> test_pairs;
    if (FamilyCount(test) >= 2) {
      const std::vector<PairRef> test_refs = MakePairs(
          test, (cfg.pair_seed ^ kTestPairSalt) + static_cast<std::uint64_t>(fold));
      test_pairs = Bind(test, test_refs, by_id);
    }
    TrainResult trained = Train(train_pairs, test_pairs, cfg.embed);
    FoldOutcome outcome;
    outcome.fold = fold;
    outcome.trace = std::move(trained.trace);
    outcome.auc = std::numeric_limits<double>::quiet_NaN();
    if (!test_pairs.empty()) {
      const std::vector<double> sims =
          PairSimilarities(test_pairs, trained.params, cfg.embed, cfg.policy);
      std::vector<ScoredPair> scored;
      for (std::size_t k = 0; k < sims.size(); ++k) {
        scored.push_back({sims[k], test_pairs[k].label});
      }
      outcome.auc = RocAuc(scored).auc;
      pooled.insert(pooled.end(), scored.begin(), scored.end());
      sum += outcome.auc;
      ++defined;
    }
    result.folds.push_back(std::move(outcome));
  }
  result.mean_auc =
      defined > 0 ? sum / defined : std::numeric_limits<double>::quiet_NaN();
  result.pooled_auc = pooled.empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : RocAuc(pooled).auc;
  return result;
}

std::vector<AblationRow> AblationRun(std::span<const FunctionRecord> corpus,
                                     std::span<const AblationVariant> variants,
                                     const CrossValidationConfig& base) {
  std::vector<AblationRow> rows;
  for (const AblationVariant& v : variants) {
    CrossValidationConfig cfg = base;
    cfg.graph = v.graph;
    cfg.features = v.features;
    rows.push_back({v, CrossValidate(corpus, cfg)});
  }
  return rows;
}

std::vector<AblationVariant> DefaultAblationVariants() {
  return {{GraphVariant::kLsfg, FeatureSet::kAll},
          {GraphVariant::kCfgOnly, FeatureSet::kAll},
          {GraphVariant::kDfgOnly, FeatureSet::kAll}};
}

std::string FormatAblation(std::span<const AblationRow> rows) {
  std::string out = "graph features mean_auc pooled_auc\n";
  for (const AblationRow& r : rows) {
    out += std::string(GraphVariantName(r.variant.graph)) + " " +
           FeatureSetName(r.variant.features) + " " +
           FormatScore(r.result.mean_auc) + " " +
           FormatScore(r.result.pooled_auc) + "\n";
  }
  return out;
}

MnSweepResult MnSweep(const Benchmark& benchmark, const Model& model,
                      std::span<const int> m_values,
                      std::span<const int> n_values, const EmuConfig& emu,
                      SignatureStore* store, ExecPolicy policy) {
  if (m_values.empty() || n_values.empty()) {
    throw std::invalid_argument("empty M or N list");
  }
  MnSweepResult out;
  out.m_values.assign(m_values.begin(), m_values.end());
  out.n_values.assign(n_values.begin(), n_values.end());
  const int max_m = *std::max_element(m_values.begin(), m_values.end());
  const int max_n = *std::max_element(n_values.begin(), n_values.end());

  const EmbeddingIndex index = EmbedCorpus(benchmark.corpus, model, policy);
  CalleeIndex callees(benchmark.queries);
  callees.Add(benchmark.corpus);
  std::vector<const FunctionRecord*> run;
  for (const FunctionRecord& f : benchmark.corpus) run.push_back(&f);
  for (const FunctionRecord& f : benchmark.queries) run.push_back(&f);
  const std::vector<EmulationResult> emu_results =
      EmulateCached(run, callees, emu, store, policy);
  std::map<std::string, const EmulationResult*> sig;
  for (std::size_t i = 0; i < run.size(); ++i) sig[run[i]->id] = &emu_results[i];

  std::vector<std::vector<int>> hits(m_values.size(),
                                     std::vector<int>(n_values.size(), 0));
  for (const FunctionRecord& q : benchmark.queries) {
    const std::string& clone = benchmark.clone_of.at(q.id);
    const RowVector qv = Embed(BuildLsfg(q), model.params, model.cfg);
    const std::vector<RankedResult> learning = TopM(qv, index, q.id, max_m);
    const int lr = RankOf(learning, clone);
    out.learning_ranks.push_back(lr <= max_n ? lr : 0);
    const EmulationResult& qs = *sig.at(q.id);
    for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
      const int m = m_values[mi];
      std::vector<RankedResult> scored;
      std::vector<RankedResult> failed;
      for (int k = 0; k < m; ++k) {
        const EmulationResult& r = *sig.at(learning[k].id);
        if (qs.failed || r.failed) {
          failed.push_back({learning[k].id, std::string(kStageBackfill), 0.0, 0});
        } else {
          scored.push_back({learning[k].id, std::string(kStageEmulation),
                            Jaccard(qs.signature, r.signature), 0});
        }
      }
      std::stable_sort(scored.begin(), scored.end(),
                       [](const RankedResult& a, const RankedResult& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.id < b.id;
                       });
      scored.insert(scored.end(), failed.begin(), failed.end());
      for (std::size_t k = 0; k < scored.size(); ++k) scored[k].rank = k + 1;
      const int rank = RankOf(scored, clone);
      for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
        if (rank >= 1 && rank <= n_values[ni]) ++hits[mi][ni];
      }
      if (m == max_m) out.two_stage_ranks.push_back(rank <= max_n ? rank : 0);
    }
  }
  const int queries = static_cast<int>(benchmark.queries.size());
  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
      if (n_values[ni] > m_values[mi]) continue;
      SweepCell c;
      c.m = m_values[mi];
      c.n = n_values[ni];
      c.hits = hits[mi][ni];
      c.queries = queries;
      c.percentage = queries > 0 ? 100.0 * c.hits / queries : 0.0;
      out.cells.push_back(c);
    }
  }
  return out;
}

std::string FormatSweep(const MnSweepResult& sweep) {
  std::string out = "m n hits queries percentage\n";
  for (const SweepCell& c : sweep.cells) {
    char pct[32];
    std::snprintf(pct, sizeof(pct), "%.2f", c.percentage);
    out += std::to_string(c.m) + " " + std::to_string(c.n) + " " +
           std::to_string(c.hits) + " " + std::to_string(c.queries) + " " +
           pct + "\n";
  }
  out += "learning_mrr " + FormatScore(Mrr(sweep.learning_ranks)) + "\n";
  out += "two_stage_mrr " + FormatScore(Mrr(sweep.two_stage_ranks)) + "\n";
  return out;
}

}  // namespace binseeker
