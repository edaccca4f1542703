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


#include "binseeker/pipeline.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <stdexcept>

#include "binseeker/error.h"
#include "binseeker/eval.h"
#include "binseeker/lsfg.h"

namespace binseeker {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

bool Better(const RankedResult& a, const RankedResult& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

void Number(std::vector<RankedResult>* v) {
  for (std::size_t i = 0; i < v->size(); ++i) (*v)[i].rank = static_cast<int>(i) + 1;
}

}  // namespace

EmbeddingIndex EmbedCorpus(std::span<const FunctionRecord> corpus,
                           const Model& model, ExecPolicy policy) {
  EmbeddingIndex index;
  const std::vector<Lsfg> graphs = BuildLsfgs(corpus, policy);
  index.vectors = EmbedGraphs(graphs, model.params, model.cfg, policy);
  for (const FunctionRecord& f : corpus) index.ids.push_back(f.id);
  return index;
}

std::vector<RankedResult> TopM(const RowVector& query,
                               const EmbeddingIndex& index,
                               std::string_view exclude_id, int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  std::vector<RankedResult> all;
  all.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index.ids[i] == exclude_id) continue;
    all.push_back({index.ids[i], std::string(kStageLearning),
                   Cosine(query, index.vectors[i]), 0});
  }
  if (static_cast<std::size_t>(m) > all.size()) {
    throw MTooLarge("m = " + std::to_string(m) + " exceeds the " +
                    std::to_string(all.size()) + " candidates");
  }
  std::partial_sort(all.begin(), all.begin() + m, all.end(), Better);
  all.resize(m);
  Number(&all);
  return all;
}

std::vector<RankedResult> TopM(const FunctionRecord& query,
                               std::span<const FunctionRecord> corpus,
                               const Model& model, int m) {
  const EmbeddingIndex index = EmbedCorpus(corpus, model);
  return TopM(Embed(BuildLsfg(query), model.params, model.cfg), index,
              query.id, m);
}

std::vector<EmulationResult> EmulateCached(
    std::span<const FunctionRecord* const> functions,
    const CalleeIndex& callees, const EmuConfig& cfg, SignatureStore* store,
    ExecPolicy policy) {
  std::vector<EmulationResult> out(functions.size());
  std::vector<const FunctionRecord*> todo;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (store != nullptr) {
      if (auto hit = store->Lookup(*functions[i],
                                   SignatureKey(*functions[i], &callees, cfg))) {
        out[i] = std::move(*hit);
        continue;
      }
    }
    todo.push_back(functions[i]);
    slots.push_back(i);
  }
  std::vector<EmulationResult> fresh = EmulateAll(todo, &callees, cfg, policy);
  for (std::size_t k = 0; k < todo.size(); ++k) {
    if (store != nullptr) {
      store->Put(*todo[k], cfg, SignatureKey(*todo[k], &callees, cfg), fresh[k]);
    }
    out[slots[k]] = std::move(fresh[k]);
  }
  return out;
}

RerankOutcome Rerank(const FunctionRecord& query,
                     std::span<const std::string> candidates,
                     std::span<const FunctionRecord> corpus,
                     std::span<const FunctionRecord> query_pool,
                     const EmuConfig& cfg, int n, SignatureStore* store,
                     ExecPolicy policy) {
  if (n < 1 || static_cast<std::size_t>(n) > candidates.size()) {
    throw std::invalid_argument("n must lie in [1, candidate count]");
  }
  CalleeIndex callees(query_pool);
  callees.Add(corpus);
  callees.Add(query);
  CalleeIndex searched(corpus);
  std::vector<const FunctionRecord*> run = {&query};
  for (const std::string& id : candidates) {
    const FunctionRecord* f = searched.Find(id);
    if (f == nullptr) {
      throw std::invalid_argument("candidate " + id + " is not in the corpus");
    }
    run.push_back(f);
  }
  const std::vector<EmulationResult> emu =
      EmulateCached(run, callees, cfg, store, policy);

  RerankOutcome out;
  out.emulated = static_cast<int>(run.size());
  std::vector<RankedResult> scored;
  std::vector<std::string> failed;
  if (emu[0].failed) {
    out.warnings.push_back("query " + query.id + " could not be emulated");
  }
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const EmulationResult& r = emu[k + 1];
    for (const std::string& w : r.warnings) {
      out.warnings.push_back(candidates[k] + ": " + w);
    }
    if (emu[0].failed || r.failed) {
      if (!emu[0].failed) {
        out.warnings.push_back("skipped " + candidates[k] +
                               ": could not be emulated");
      }
      failed.push_back(candidates[k]);
      continue;
    }
    scored.push_back({candidates[k], std::string(kStageEmulation),
                      Jaccard(emu[0].signature, r.signature), 0});
  }
  std::stable_sort(scored.begin(), scored.end(), Better);
  if (scored.size() > static_cast<std::size_t>(n)) scored.resize(n);
  for (std::size_t k = 0; scored.size() < static_cast<std::size_t>(n); ++k) {
    scored.push_back({failed[k], std::string(kStageBackfill), 0.0, 0});
  }
  Number(&scored);
  out.results = std::move(scored);
  return out;
}

double TimingReport::per_function_learning() const {
  return embedded > 0 ? learning_seconds / embedded : 0.0;
}

double TimingReport::per_function_emulation() const {
  return emulated > 0 ? emulation_seconds / emulated : 0.0;
}

SearchResult Search(const FunctionRecord& query,
                    std::span<const FunctionRecord> corpus, const Model& model,
                    const PipelineConfig& cfg, SignatureStore* store,
                    std::span<const FunctionRecord> query_pool) {
  const auto t0 = Clock::now();
  const EmbeddingIndex index = EmbedCorpus(corpus, model, cfg.policy);
  const double embed_seconds = Seconds(t0, Clock::now());
  SearchResult r = Search(query, corpus, index, model, cfg, store, query_pool);
  r.timing.learning_seconds += embed_seconds;
  r.timing.embedded += static_cast<int>(corpus.size());
  return r;
}

SearchResult Search(const FunctionRecord& query,
                    std::span<const FunctionRecord> corpus,
                    const EmbeddingIndex& index, const Model& model,
                    const PipelineConfig& cfg, SignatureStore* store,
                    std::span<const FunctionRecord> query_pool) {
  if (cfg.n < 1 || cfg.n > cfg.m) {
    throw std::invalid_argument("need 1 <= n <= m");
  }
  cfg.emu.Validate();
  SearchResult r;
  const auto t0 = Clock::now();
  const RowVector q = Embed(BuildLsfg(query), model.params, model.cfg);
  r.candidates = TopM(q, index, query.id, cfg.m);
  const auto t1 = Clock::now();
  std::vector<std::string> ids;
  for (const RankedResult& c : r.candidates) ids.push_back(c.id);
  const int hits_before = store != nullptr ? store->hits() : 0;
  RerankOutcome rr = Rerank(query, ids, corpus, query_pool, cfg.emu, cfg.n,
                            store, cfg.policy);
  const auto t2 = Clock::now();
  r.results = std::move(rr.results);
  r.warnings = std::move(rr.warnings);
  r.timing.learning_seconds = Seconds(t0, t1);
  r.timing.emulation_seconds = Seconds(t1, t2);
  r.timing.embedded = 1;
  r.timing.emulated = rr.emulated;
  r.timing.cache_hits = store != nullptr ? store->hits() - hits_before : 0;
  return r;
}

std::string FormatResults(const std::map<std::string, std::string>& header,
                          std::span<const RankedResult> results) {
  std::string out;
  for (const auto& [k, v] : header) out += "# " + k + " " + v + "\n";
  for (const RankedResult& r : results) {
    out += std::to_string(r.rank) + " " + r.id + " " + r.stage + " " +
           FormatScore(r.score) + "\n";
  }
  return out;
}

ResultFile ParseResults(std::string_view content) {
  ResultFile file;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto fail = [&](const char* what) {
      return MalformedDocument("results line " + std::to_string(line_no) +
                               ": " + what);
    };
    if (line.starts_with("# ")) {
      line.remove_prefix(2);
      const std::size_t sp = line.find(' ');
      if (sp == std::string_view::npos) throw fail("header needs a value");
      file.header[std::string(line.substr(0, sp))] =
          std::string(line.substr(sp + 1));
      continue;
    }
    std::vector<std::string_view> tok;
    std::size_t i = 0;
    while (i < line.size()) {
      const std::size_t j = std::min(line.find(' ', i), line.size());
      if (j > i) tok.push_back(line.substr(i, j - i));
      i = j + 1;
    }
    if (tok.size() != 4) throw fail("expected '<rank> <id> <stage> <score>'");
    RankedResult r;
    auto [p1, e1] = std::from_chars(tok[0].data(), tok[0].data() + tok[0].size(), r.rank);
    auto [p2, e2] = std::from_chars(tok[3].data(), tok[3].data() + tok[3].size(), r.score);
    if (e1 != std::errc() || p1 != tok[0].data() + tok[0].size() ||
        e2 != std::errc() || p2 != tok[3].data() + tok[3].size()) {
      throw fail("bad number");
    }
    r.id = tok[1];
    r.stage = tok[2];
    file.results.push_back(std::move(r));
  }
  return file;
}

std::string FormatTiming(const TimingReport& t) {
  return FormatKeyValues({
      {"learning_seconds", FormatScore(t.learning_seconds)},
      {"emulation_seconds", FormatScore(t.emulation_seconds)},
      {"embedded_functions", std::to_string(t.embedded)},
      {"emulated_functions", std::to_string(t.emulated)},
      {"signature_cache_hits", std::to_string(t.cache_hits)},
      {"learning_seconds_per_function", FormatScore(t.per_function_learning())},
      {"emulation_seconds_per_function", FormatScore(t.per_function_emulation())},
  });
}

int RankOf(std::span<const RankedResult> results, std::string_view id) {
  for (const RankedResult& r : results) {
    if (r.id == id) return r.rank;
  }
  return 0;
}

}  // namespace binseeker
