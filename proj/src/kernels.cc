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

#include "binseeker/kernels.h"

#include <omp.h>

#include <exception>
#include <unordered_map>

#include "binseeker/error.h"

namespace binseeker {
namespace {

int g_default_threads = 0;

// Runs body(i) for i in [0, n). Under kParallel the iterations are spread
// over OpenMP threads; the exception of the lowest failing index is
// rethrown on the calling thread.
template <typename Body>
void ForEach(std::size_t n, ExecPolicy policy, Body&& body) {
  if (policy == ExecPolicy::kSerial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

void SetThreadCount(int n) {
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : g_default_threads);
}

int ThreadCount() { return omp_get_max_threads(); }

std::vector<Lsfg> BuildLsfgs(std::span<const FunctionRecord> functions,
                             ExecPolicy policy) {
  std::vector<Lsfg> out(functions.size());
  ForEach(functions.size(), policy,
          [&](std::size_t i) { out[i] = BuildLsfg(functions[i]); });
  return out;
}

std::vector<RowVector> EmbedGraphs(std::span<const Lsfg> graphs,
                                   const ModelParams& params,
                                   const EmbedConfig& cfg, ExecPolicy policy) {
  std::vector<RowVector> out(graphs.size());
  ForEach(graphs.size(), policy,
          [&](std::size_t i) { out[i] = Embed(graphs[i], params, cfg); });
  return out;
}

BatchGradient ComputeBatchGradient(std::span<const LabeledPair> pairs,
                                   std::span<const std::size_t> batch,
                                   const ModelParams& params,
                                   const EmbedConfig& cfg, ExecPolicy policy) {
  BatchGradient out;
  out.mean_grad = params.ZerosLike();
  if (batch.empty()) return out;
  if (policy == ExecPolicy::kSerial) {
    for (std::size_t k = 0; k < batch.size(); ++k) {
      PairGradient g = Grad(pairs[batch[k]], params, cfg);
      out.mean_grad.AddScaled(g.grad, 1.0);
      out.loss_sum += g.loss;
    }
  } else {
    std::vector<PairGradient> parts(batch.size());
    ForEach(batch.size(), policy, [&](std::size_t k) {
      parts[k] = Grad(pairs[batch[k]], params, cfg);
    });
    for (const PairGradient& g : parts) {
      out.mean_grad.AddScaled(g.grad, 1.0);
      out.loss_sum += g.loss;
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (Matrix* m : out.mean_grad.Matrices()) *m *= inv;
  return out;
}

std::vector<double> PairSimilarities(std::span<const LabeledPair> pairs,
                                     const ModelParams& params,
                                     const EmbedConfig& cfg,
                                     ExecPolicy policy) {
  std::unordered_map<const Lsfg*, std::size_t> index;
  std::vector<const Lsfg*> unique;
  for (const LabeledPair& p : pairs) {
    for (const Lsfg* g : {p.g1, p.g2}) {
      if (index.emplace(g, unique.size()).second) unique.push_back(g);
    }
  }
  std::vector<RowVector> emb(unique.size());
  ForEach(unique.size(), policy,
          [&](std::size_t i) { emb[i] = Embed(*unique[i], params, cfg); });
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const LabeledPair& p : pairs) {
    out.push_back(Cosine(emb[index[p.g1]], emb[index[p.g2]]));
  }
  return out;
}

std::vector<EmulationResult> EmulateAll(
    std::span<const FunctionRecord* const> functions,
    const CalleeIndex* callees, const EmuConfig& cfg, ExecPolicy policy) {
  std::vector<EmulationResult> out(functions.size());
  ForEach(functions.size(), policy, [&](std::size_t i) {
    try {
      out[i] = Emulate(*functions[i], callees, cfg);
    } catch (const MissingMicroOps& e) {
      out[i].failed = true;
      out[i].warnings.push_back(e.what());
    }
  });
  return out;
}

}  // namespace binseeker
