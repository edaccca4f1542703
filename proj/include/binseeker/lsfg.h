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

// Labeled semantic flow graph: basic blocks as vertices carrying 8 feature
// counts, CFG edges (label 0) and inferred inter-block data-dependence edges
// (label 1).

#ifndef BINSEEKER_LSFG_H_
#define BINSEEKER_LSFG_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "binseeker/func_model.h"
#include "binseeker/profiles.h"

namespace binseeker {

using FeatureVector = std::array<std::int32_t, kNumFeatureCategories>;

struct Edge {
  int src = 0;
  int dst = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Lsfg {
  std::string function_id;
  std::vector<std::string> block_ids;
  std::vector<FeatureVector> features;
  // In cfg declaration order.
  std::vector<Edge> control_edges;
  // Sorted, unique, never self-loops.
  std::vector<Edge> data_edges;

  int num_vertices() const { return static_cast<int>(block_ids.size()); }
  friend bool operator==(const Lsfg&, const Lsfg&) = default;
};

inline constexpr std::size_t kDefaultPathBudget = 10000;

FeatureVector ExtractFeatures(const BasicBlock& block,
                              const ArchProfile& profile);

// Edge (b, b') iff some location is read in b' before b' writes it and a
// CFG path from b reaches b' with no intermediate block writing it.
std::vector<Edge> InferDfg(const FunctionRecord& f, const ArchProfile& profile);

// The two underlying solvers. The path enumerator throws PathExplosion when
// more than `path_budget` partial paths are visited.
std::vector<Edge> InferDfgByPaths(const FunctionRecord& f,
                                  const ArchProfile& profile,
                                  std::size_t path_budget = kDefaultPathBudget);
std::vector<Edge> InferDfgByReachingDefinitions(const FunctionRecord& f,
                                                const ArchProfile& profile);

Lsfg BuildLsfg(const FunctionRecord& f, const ArchProfile& profile);
// Profile looked up from f.arch.
Lsfg BuildLsfg(const FunctionRecord& f);

// Ablation views of an LSFG.
enum class GraphVariant { kLsfg, kCfgOnly, kDfgOnly };
enum class FeatureSet { kAll, kZero, kNoGeneric, kControlOnly };

const char* GraphVariantName(GraphVariant variant);
const char* FeatureSetName(FeatureSet set);
Lsfg ApplyVariant(Lsfg graph, GraphVariant variant, FeatureSet features);

// Text dump: "v <block> <8 counts>" lines, then "e <src> <dst> <0|1>".
std::string DumpLsfg(const Lsfg& graph);

}  // namespace binseeker

#endif  // BINSEEKER_LSFG_H_
