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

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "binseeker/dataset.h"
#include "binseeker/error.h"

namespace binseeker {
namespace {

std::size_t Draw(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

std::vector<std::string_view> SplitWs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::vector<PairRef> MakePairs(std::span<const FunctionRecord> corpus,
                               std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> families;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].source_key) {
      throw InvariantViolation(corpus[i].id, "no source_key");
    }
    families[*corpus[i].source_key].push_back(i);
  }
  if (families.size() < 2) {
    throw TooFewFamilies("pairs need at least two families");
  }
  for (const auto& [key, members] : families) {
    if (members.size() < 2) {
      throw InvariantViolation(corpus[members.front()].id,
                               "alone in family " + key);
    }
  }
  std::mt19937_64 rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<PairRef> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& same = families[*corpus[i].source_key];
    std::vector<std::size_t> pos;
    for (std::size_t j : same) {
      if (j != i && !seen.count({i, j})) pos.push_back(j);
    }
    if (!pos.empty()) {
      const std::size_t j = pos[Draw(rng, pos.size())];
      seen.insert({i, j});
      out.push_back({i, j, 1});
    }
    // Rejection sampling over the other families; the fallback scan keeps
    // it total when nearly every candidate is taken.
    const std::size_t others = corpus.size() - same.size();
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      const std::size_t j = Draw(rng, corpus.size());
      if (*corpus[j].source_key == *corpus[i].source_key || seen.count({i, j})) {
        continue;
      }
      seen.insert({i, j});
      out.push_back({i, j, -1});
      placed = true;
    }
    if (!placed && others > 0) {
      for (std::size_t j = 0; j < corpus.size(); ++j) {
        if (*corpus[j].source_key != *corpus[i].source_key &&
            !seen.count({i, j})) {
          seen.insert({i, j});
          out.push_back({i, j, -1});
          break;
        }
      }
    }
  }
  return out;
}

std::string SerializePairs(std::span<const PairLine> pairs) {
  std::string out;
  for (const PairLine& p : pairs) {
    out += "P " + p.first + " " + p.second + (p.label > 0 ? " +1\n" : " -1\n");
  }
  return out;
}

std::vector<PairLine> ParsePairs(std::string_view content) {
  std::vector<PairLine> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tok = SplitWs(line);
    if (tok.empty()) continue;
    if (tok.size() != 4 || tok[0] != "P" || (tok[3] != "+1" && tok[3] != "-1")) {
      throw MalformedDocument("pairs line " + std::to_string(line_no) +
                              ": expected 'P <id> <id> +1|-1'");
    }
    out.push_back({std::string(tok[1]), std::string(tok[2]),
                   tok[3] == "+1" ? 1 : -1});
  }
  return out;
}

std::vector<PairLine> ToPairLines(std::span<const FunctionRecord> corpus,
                                  std::span<const PairRef> pairs) {
  std::vector<PairLine> out;
  out.reserve(pairs.size());
  for (const PairRef& p : pairs) {
    out.push_back({corpus[p.first].id, corpus[p.second].id, p.label});
  }
  return out;
}

std::vector<std::string> FoldPlan::FamiliesIn(int fold) const {
  std::vector<std::string> out;
  for (const auto& [key, f] : assignments) {
    if (f == fold) out.push_back(key);
  }
  return out;
}

FoldPlan FoldSplit(std::span<const FunctionRecord> corpus, int k,
                   std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("fold count must be >= 2");
  std::vector<std::string> keys;
  std::set<std::string> seen;
  for (const FunctionRecord& f : corpus) {
    if (!f.source_key) {
      throw InvariantViolation(f.id, "no source_key");
    }
    if (seen.insert(*f.source_key).second) keys.push_back(*f.source_key);
  }
  if (static_cast<int>(keys.size()) < k) {
    throw TooFewFamilies("need at least " + std::to_string(k) +
                         " families, have " + std::to_string(keys.size()));
  }
  std::sort(keys.begin(), keys.end());
  std::mt19937_64 rng(seed);
  for (std::size_t i = keys.size(); i > 1; --i) {
    std::swap(keys[i - 1], keys[Draw(rng, i)]);
  }
  FoldPlan plan;
  plan.k = k;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    plan.assignments[keys[i]] = static_cast<int>(i % k);
  }
  return plan;
}

std::vector<FunctionRecord> SelectFold(std::span<const FunctionRecord> corpus,
                                       const FoldPlan& plan, int fold,
                                       bool in_fold) {
  std::vector<FunctionRecord> out;
  for (const FunctionRecord& f : corpus) {
    const auto it = plan.assignments.find(f.source_key.value_or(""));
    if (it == plan.assignments.end()) continue;
    if ((it->second == fold) == in_fold) out.push_back(f);
  }
  return out;
}

Benchmark BuildBenchmark(const BenchmarkSpec& spec) {
  if (spec.distractor_families < 1 || spec.query_families < 1) {
    throw std::invalid_argument("benchmark needs distractors and queries");
  }
  if (spec.query_variant == spec.clone_variant ||
      spec.query_variant < 0 || spec.clone_variant < 0 ||
      spec.query_variant >= spec.variants_per_family ||
      spec.clone_variant >= spec.variants_per_family) {
    throw std::invalid_argument("bad query/clone variant");
  }
  CorpusSpec cs;
  cs.families = spec.distractor_families + spec.query_families;
  cs.variants_per_family = spec.variants_per_family;
  cs.seed = spec.seed;
  cs.dialects = spec.dialects;
  cs.transform_levels = spec.transform_levels;
  std::vector<int> all(spec.variants_per_family);
  for (int v = 0; v < spec.variants_per_family; ++v) all[v] = v;
  const int pick_clone[] = {spec.clone_variant};
  const int pick_query[] = {spec.query_variant};
  Benchmark b;
  for (int f = 0; f < spec.distractor_families; ++f) {
    for (FunctionRecord& r : GenFamily(cs, f, all)) b.corpus.push_back(std::move(r));
  }
  for (int f = spec.distractor_families; f < cs.families; ++f) {
    FunctionRecord clone = GenFamily(cs, f, pick_clone).front();
    FunctionRecord query = GenFamily(cs, f, pick_query).front();
    b.clone_of[query.id] = clone.id;
    b.corpus.push_back(std::move(clone));
    b.queries.push_back(std::move(query));
  }
  return b;
}

}  // namespace binseeker
