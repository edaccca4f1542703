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

#include "binseeker/eval.h"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "binseeker/error.h"

namespace binseeker {

TopkResult TopkHits(std::span<const QueryRank> ranks, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  TopkResult r;
  r.queries = static_cast<int>(ranks.size());
  for (QueryRank rank : ranks) {
    if (rank < 0) throw std::invalid_argument("negative rank");
    if (rank >= 1 && rank <= k) ++r.hits;
  }
  r.percentage = r.queries ? 100.0 * r.hits / r.queries : 0.0;
  return r;
}

double Mrr(std::span<const QueryRank> ranks) {
  if (ranks.empty()) return 0.0;
  double sum = 0.0;
  for (QueryRank rank : ranks) {
    if (rank < 0) throw std::invalid_argument("negative rank");
    if (rank > 0) sum += 1.0 / rank;
  }
  return sum / static_cast<double>(ranks.size());
}

RocResult RocAuc(std::span<const ScoredPair> pairs) {
  std::vector<ScoredPair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredPair& a, const ScoredPair& b) {
              return a.score > b.score;
            });
  double pos = 0, neg = 0;
  for (const ScoredPair& p : sorted) (p.label > 0 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) {
    throw SingleClassInput("ROC needs both positive and negative pairs");
  }
  RocResult out;
  out.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  // Walk tie groups from the highest score; each negative in a group beats
  // every positive seen in earlier groups and ties half of its own group.
  double tp = 0, fp = 0, wins = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double gp = 0, gn = 0;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      (sorted[j].label > 0 ? gp : gn) += 1;
      ++j;
    }
    wins += gn * tp + 0.5 * gn * gp;
    tp += gp;
    fp += gn;
    out.points.push_back({sorted[i].score, fp / neg, tp / pos});
    i = j;
  }
  out.auc = wins / (pos * neg);
  return out;
}

std::string FormatTopkTable(std::span<const QueryRank> ranks,
                            std::span<const int> ks) {
  std::ostringstream out;
  out << "k hits queries percentage\n";
  for (int k : ks) {
    TopkResult r = TopkHits(ranks, k);
    out << (k == kUnboundedK ? std::string("inf") : std::to_string(k)) << ' '
        << r.hits << ' ' << r.queries << ' ' << FormatScore(r.percentage)
        << '\n';
  }
  return out.str();
}

std::string FormatKeyValues(const std::map<std::string, std::string>& values) {
  std::ostringstream out;
  for (const auto& [key, value] : values) out << key << ' ' << value << '\n';
  return out.str();
}

std::string FormatScore(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace binseeker
