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


// Two-stage clone search: cosine top-M over learned embeddings, then
// Jaccard re-ranking of emulation signatures down to top-N.

#ifndef BINSEEKER_PIPELINE_H_
#define BINSEEKER_PIPELINE_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binseeker/embed.h"
#include "binseeker/emulator.h"
#include "binseeker/func_model.h"
#include "binseeker/kernels.h"
#include "binseeker/signature_store.h"

namespace binseeker {

struct PipelineConfig {
  int m = 200;
  int n = 25;
  EmuConfig emu;
  ExecPolicy policy = ExecPolicy::kParallel;
};

inline constexpr std::string_view kStageLearning = "learning";
inline constexpr std::string_view kStageEmulation = "emulation";
// Filled in from the learning-stage order when candidates fail to emulate.
inline constexpr std::string_view kStageBackfill = "backfill";

struct RankedResult {
  std::string id;
  std::string stage;
  double score = 0.0;
  int rank = 0;  // 1-based
  friend bool operator==(const RankedResult&, const RankedResult&) = default;
};

struct EmbeddingIndex {
  std::vector<std::string> ids;
  std::vector<RowVector> vectors;

  std::size_t size() const { return ids.size(); }
};

EmbeddingIndex EmbedCorpus(std::span<const FunctionRecord> corpus,
                           const Model& model,
                           ExecPolicy policy = ExecPolicy::kParallel);

// The m entries of `index` most cosine-similar to `query`, excluding
// `exclude_id`; ties by ascending id. Throws MTooLarge when fewer than m
// candidates remain and std::invalid_argument when m < 1.
std::vector<RankedResult> TopM(const RowVector& query,
                               const EmbeddingIndex& index,
                               std::string_view exclude_id, int m);
std::vector<RankedResult> TopM(const FunctionRecord& query,
                               std::span<const FunctionRecord> corpus,
                               const Model& model, int m);

// Emulation results for `functions`, served from and added to `store`.
// Callees resolve against `callees`.
std::vector<EmulationResult> EmulateCached(
    std::span<const FunctionRecord* const> functions,
    const CalleeIndex& callees, const EmuConfig& cfg, SignatureStore* store,
    ExecPolicy policy = ExecPolicy::kParallel);

struct RerankOutcome {
  std::vector<RankedResult> results;
  std::vector<std::string> warnings;
  int emulated = 0;  // query plus candidates that were run or looked up
};

// Top-n candidates by Jaccard similarity to the query's signature, ties by
// ascending id. Candidates that fail to emulate are skipped with a warning
// and the list is back-filled in candidate order. Callees resolve against
// the corpus, the query and `query_pool` (functions shipped alongside the
// query but not searched).
RerankOutcome Rerank(const FunctionRecord& query,
                     std::span<const std::string> candidates,
                     std::span<const FunctionRecord> corpus,
                     std::span<const FunctionRecord> query_pool,
                     const EmuConfig& cfg, int n, SignatureStore* store,
                     ExecPolicy policy = ExecPolicy::kParallel);

struct TimingReport {
  double learning_seconds = 0.0;
  double emulation_seconds = 0.0;
  int embedded = 0;
  int emulated = 0;
  int cache_hits = 0;

  double per_function_learning() const;
  double per_function_emulation() const;
};

struct SearchResult {
  std::vector<RankedResult> candidates;  // learning stage, m entries
  std::vector<RankedResult> results;     // final, n entries
  TimingReport timing;
  std::vector<std::string> warnings;
};

// Validates 1 <= n <= m and runs TopM then Rerank.
SearchResult Search(const FunctionRecord& query,
                    std::span<const FunctionRecord> corpus, const Model& model,
                    const PipelineConfig& cfg, SignatureStore* store,
                    std::span<const FunctionRecord> query_pool = {});
// Same, with a precomputed corpus embedding.
SearchResult Search(const FunctionRecord& query,
                    std::span<const FunctionRecord> corpus,
                    const EmbeddingIndex& index, const Model& model,
                    const PipelineConfig& cfg, SignatureStore* store,
                    std::span<const FunctionRecord> query_pool = {});

// Result file: "# key value" header lines, then "<rank> <id> <stage> <score>".
std::string FormatResults(const std::map<std::string, std::string>& header,
                          std::span<const RankedResult> results);
struct ResultFile {
  std::map<std::string, std::string> header;
  std::vector<RankedResult> results;
};
ResultFile ParseResults(std::string_view content);  // MalformedDocument
std::string FormatTiming(const TimingReport& timing);

// 1-based rank of `id` in results, 0 when absent.
int RankOf(std::span<const RankedResult> results, std::string_view id);

}  // namespace binseeker

#endif  // BINSEEKER_PIPELINE_H_
