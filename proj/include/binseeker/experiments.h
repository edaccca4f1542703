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


// Experiment drivers: family-level cross-validated AUC, graph/feature
// ablations and the (M, N) success grid on a planted-clone benchmark.

#ifndef BINSEEKER_EXPERIMENTS_H_
#define BINSEEKER_EXPERIMENTS_H_

#include <span>
#include <string>
#include <vector>

#include "binseeker/dataset.h"
#include "binseeker/embed.h"
#include "binseeker/kernels.h"
#include "binseeker/lsfg.h"
#include "binseeker/pipeline.h"

namespace binseeker {

struct CrossValidationConfig {
  int folds = 10;
  std::uint64_t fold_seed = 1;
  std::uint64_t pair_seed = 1;
  // Folds 0..max_folds-1 are evaluated; all of them when <= 0.
  int max_folds = 0;
  EmbedConfig embed;
  GraphVariant graph = GraphVariant::kLsfg;
  FeatureSet features = FeatureSet::kAll;
  ExecPolicy policy = ExecPolicy::kParallel;
};

struct FoldOutcome {
  int fold = 0;
  double auc = 0.0;  // NaN when the test fold lacks a label
  std::vector<EpochTrace> trace;
};

struct CrossValidationResult {
  std::vector<FoldOutcome> folds;
  double mean_auc = 0.0;    // over folds with a defined AUC
  double pooled_auc = 0.0;  // all test-pair scores ranked together
};

// For each fold: train on pairs drawn among the other folds' functions and
// score pairs drawn among the fold's own functions.
CrossValidationResult CrossValidate(std::span<const FunctionRecord> corpus,
                                    const CrossValidationConfig& cfg);

struct AblationVariant {
  GraphVariant graph = GraphVariant::kLsfg;
  FeatureSet features = FeatureSet::kAll;
};

struct AblationRow {
  AblationVariant variant;
  CrossValidationResult result;
};

// Every variant shares the fold plan, pairs and initial parameters.
std::vector<AblationRow> AblationRun(std::span<const FunctionRecord> corpus,
                                     std::span<const AblationVariant> variants,
                                     const CrossValidationConfig& base);

std::vector<AblationVariant> DefaultAblationVariants();
std::string FormatAblation(std::span<const AblationRow> rows);

struct SweepCell {
  int m = 0;
  int n = 0;
  int hits = 0;
  int queries = 0;
  double percentage = 0.0;
};

struct MnSweepResult {
  std::vector<int> m_values;
  std::vector<int> n_values;
  std::vector<SweepCell> cells;  // m-major
  // Rank of the planted clone per query at the largest M and N, and in the
  // learning stage alone (0 = not retrieved).
  std::vector<int> two_stage_ranks;
  std::vector<int> learning_ranks;
};

// Skips cells with n > m. Requires every m <= corpus size.
MnSweepResult MnSweep(const Benchmark& benchmark, const Model& model,
                      std::span<const int> m_values,
                      std::span<const int> n_values, const EmuConfig& emu,
                      SignatureStore* store,
                      ExecPolicy policy = ExecPolicy::kParallel);

std::string FormatSweep(const MnSweepResult& sweep);

}  // namespace binseeker

#endif  // BINSEEKER_EXPERIMENTS_H_
