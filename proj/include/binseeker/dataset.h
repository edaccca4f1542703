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

// Synthetic clone corpora, ground-truth pairs and family-level folds.
//
// A family is one randomly generated source function in a small structured
// language (three-address arithmetic, ifs, bounded loops, library calls,
// constant-table reads, global stores and calls to lower-numbered
// families). Each variant lowers the source to one dialect at one transform
// tier:
//   tier 0   the first variables take the dialect's callee-saved registers
//            in a fixed order, the rest live in stack slots; every transfer
//            is an explicit jump;
//   tier 1+  those registers are renamed at random, branch senses are
//            flipped at random and jumps to the next block become
//            fallthroughs;
//   tier 2+  blocks are split, dead generic instructions are inserted and
//            add/sub immediates are swapped for their negated twin.
// Variant v uses dialect dialects[v % |dialects|] and tier
// (v / |dialects|) % transform_levels.

#ifndef BINSEEKER_DATASET_H_
#define BINSEEKER_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binseeker/func_model.h"

namespace binseeker {

struct CorpusSpec {
  int families = 20;
  int variants_per_family = 6;
  std::uint64_t seed = 1;
  std::vector<std::string> dialects = {"alpha", "beta"};
  int transform_levels = 3;

  // Throws std::invalid_argument. Requires families >= 1 and variants >= 2.
  void Validate() const;
};

std::string FunctionId(int family, int variant);  // "f007.v3"
std::string SourceKey(int family);                // "src007"

// All variants of families 0..families-1, family-major.
std::vector<FunctionRecord> GenCorpus(const CorpusSpec& spec);

// Variants of one family only. Calls inside it name lower families'
// variants with the same index, so those must be available to emulation.
std::vector<FunctionRecord> GenFamily(const CorpusSpec& spec, int family,
                                      std::span<const int> variants);

// Indices into the corpus the pair was drawn from.
struct PairRef {
  std::size_t first = 0;
  std::size_t second = 0;
  int label = 1;
  friend bool operator==(const PairRef&, const PairRef&) = default;
};

// For every function: one positive pair with a uniformly chosen other member
// of its family and one negative pair with a uniformly chosen function of a
// different family. Ordered pairs never repeat. Throws TooFewFamilies when
// fewer than two families are present and InvariantViolation when a record
// has no source_key or is alone in its family.
std::vector<PairRef> MakePairs(std::span<const FunctionRecord> corpus,
                               std::uint64_t seed);

struct PairLine {
  std::string first;
  std::string second;
  int label = 1;
  friend bool operator==(const PairLine&, const PairLine&) = default;
};
// Lines "P <id1> <id2> <+1|-1>".
std::string SerializePairs(std::span<const PairLine> pairs);
std::vector<PairLine> ParsePairs(std::string_view content);  // MalformedDocument
std::vector<PairLine> ToPairLines(std::span<const FunctionRecord> corpus,
                                  std::span<const PairRef> pairs);

struct FoldPlan {
  int k = 10;
  std::map<std::string, int> assignments;  // source_key -> fold

  std::vector<std::string> FamiliesIn(int fold) const;
};

// Families shuffled with the seed and dealt round-robin. Throws
// TooFewFamilies when there are fewer than k families.
FoldPlan FoldSplit(std::span<const FunctionRecord> corpus, int k,
                   std::uint64_t seed);

// Records whose family is (or is not) in `fold`, in corpus order.
std::vector<FunctionRecord> SelectFold(std::span<const FunctionRecord> corpus,
                                       const FoldPlan& plan, int fold,
                                       bool in_fold);

// Planted-clone search benchmark: `distractor_families` families contribute
// every variant to the corpus; each of the `query_families` following
// families contributes variant `query_variant` as a query and variant
// `clone_variant` to the corpus.
struct BenchmarkSpec {
  int distractor_families = 37;
  int query_families = 15;
  int variants_per_family = 5;
  int query_variant = 0;
  int clone_variant = 3;
  std::uint64_t seed = 1;
  std::vector<std::string> dialects = {"alpha", "beta"};
  int transform_levels = 3;
};

struct Benchmark {
  std::vector<FunctionRecord> corpus;
  std::vector<FunctionRecord> queries;
  std::map<std::string, std::string> clone_of;  // query id -> planted clone
};

Benchmark BuildBenchmark(const BenchmarkSpec& spec);

}  // namespace binseeker

#endif  // BINSEEKER_DATASET_H_
