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

// Retrieval and classification metrics: top-k hits, mean reciprocal rank and
// rank-statistic ROC AUC, plus canonical text reports.

#ifndef BINSEEKER_EVAL_H_
#define BINSEEKER_EVAL_H_

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace binseeker {

// Rank of the true match for one query, 1-based. 0 marks a query whose match
// was not retrieved at all; it is never a hit and adds 0 to the MRR sum.
using QueryRank = int;

inline constexpr int kUnboundedK = std::numeric_limits<int>::max();

struct TopkResult {
  int hits = 0;
  int queries = 0;
  double percentage = 0.0;
};

// Throws std::invalid_argument on a negative rank or k < 1.
TopkResult TopkHits(std::span<const QueryRank> ranks, int k);

// (1/|Q|) sum 1/rank. 0 for an empty list.
double Mrr(std::span<const QueryRank> ranks);

struct ScoredPair {
  double score = 0.0;
  int label = 1;  // > 0 positive, otherwise negative
};

struct RocPoint {
  double threshold = 0.0;  // predict positive iff score >= threshold
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocResult {
  double auc = 0.0;
  // Starts at (0, 0) with threshold +inf, then one point per distinct score
  // in descending order, ending at (1, 1).
  std::vector<RocPoint> points;
};

// Mann-Whitney statistic with ties counted as 1/2. Throws SingleClassInput
// unless both labels occur.
RocResult RocAuc(std::span<const ScoredPair> pairs);

// "k hits queries percentage" table for each k in ks.
std::string FormatTopkTable(std::span<const QueryRank> ranks,
                            std::span<const int> ks);

// One "key value" line per entry, keys in map order.
std::string FormatKeyValues(const std::map<std::string, std::string>& values);

// Shortest decimal text that parses back to exactly v.
std::string FormatScore(double v);

}  // namespace binseeker

#endif  // BINSEEKER_EVAL_H_
