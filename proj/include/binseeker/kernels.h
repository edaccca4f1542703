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

// Corpus-level data-parallel kernels. Each has an OpenMP implementation and
// a serial reference; both produce bitwise-identical results because every
// reduction runs sequentially in index order.

#ifndef BINSEEKER_KERNELS_H_
#define BINSEEKER_KERNELS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "binseeker/embed.h"
#include "binseeker/emulator.h"
#include "binseeker/lsfg.h"

namespace binseeker {

enum class ExecPolicy { kSerial, kParallel };

// Caps OpenMP parallelism; n <= 0 restores the runtime default.
void SetThreadCount(int n);
int ThreadCount();

std::vector<Lsfg> BuildLsfgs(std::span<const FunctionRecord> functions,
                             ExecPolicy policy = ExecPolicy::kParallel);

std::vector<RowVector> EmbedGraphs(std::span<const Lsfg> graphs,
                                   const ModelParams& params,
                                   const EmbedConfig& cfg,
                                   ExecPolicy policy = ExecPolicy::kParallel);

struct BatchGradient {
  ModelParams mean_grad;
  double loss_sum = 0.0;
};

// Mean gradient over pairs[batch[0]], pairs[batch[1]], ...
BatchGradient ComputeBatchGradient(std::span<const LabeledPair> pairs,
                                   std::span<const std::size_t> batch,
                                   const ModelParams& params,
                                   const EmbedConfig& cfg,
                                   ExecPolicy policy = ExecPolicy::kParallel);

// Cosine similarity of each pair; each distinct graph is embedded once.
std::vector<double> PairSimilarities(std::span<const LabeledPair> pairs,
                                     const ModelParams& params,
                                     const EmbedConfig& cfg,
                                     ExecPolicy policy = ExecPolicy::kParallel);

// A function without micro-ops yields a result with `failed` set instead of
// an exception.
std::vector<EmulationResult> EmulateAll(
    std::span<const FunctionRecord* const> functions,
    const CalleeIndex* callees, const EmuConfig& cfg,
    ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace binseeker

#endif  // BINSEEKER_KERNELS_H_
