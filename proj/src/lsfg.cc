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

#include "binseeker/lsfg.h"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "binseeker/error.h"

namespace binseeker {
namespace {

// Per-block define-use summary over interned location ids.
struct BlockSummary {
  std::vector<char> upward_exposed;  // read before any write in the block
  std::vector<char> written;
};

struct FlowFacts {
  int num_blocks = 0;
  int num_locations = 0;
  std::vector<BlockSummary> blocks;
  std::vector<std::vector<int>> successors;
};

FlowFacts Summarize(const FunctionRecord& f, const ArchProfile& profile) {
  FlowFacts facts;
  facts.num_blocks = static_cast<int>(f.blocks.size());
  std::unordered_map<std::string, int> ids;
  std::vector<std::vector<std::pair<std::vector<int>, std::vector<int>>>>
      per_block(f.blocks.size());
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<int>(ids.size()));
    return it->second;
  };
  for (std::size_t b = 0; b < f.blocks.size(); ++b) {
    for (const Instruction& instr : f.blocks[b].instructions) {
      Accesses acc = EffectiveAccesses(instr, profile);
      std::vector<int> reads, writes;
      for (const auto& r : acc.reads) reads.push_back(intern(r));
      for (const auto& w : acc.writes) writes.push_back(intern(w));
      per_block[b].emplace_back(std::move(reads), std::move(writes));
    }
  }
  facts.num_locations = static_cast<int>(ids.size());
  facts.blocks.resize(f.blocks.size());
  for (std::size_t b = 0; b < f.blocks.size(); ++b) {
    BlockSummary& s = facts.blocks[b];
    s.upward_exposed.assign(facts.num_locations, 0);
    s.written.assign(facts.num_locations, 0);
    for (const auto& [reads, writes] : per_block[b]) {
      for (int r : reads) {
        if (!s.written[r]) s.upward_exposed[r] = 1;
      }
      for (int w : writes) s.written[w] = 1;
    }
  }
  facts.successors.resize(f.blocks.size());
  for (const auto& [src, dst] : f.cfg_edges) {
    facts.successors[f.BlockIndex(src)].push_back(f.BlockIndex(dst));
  }
  return facts;
}

std::vector<Edge> Normalize(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

class PathWalker {
 public:
  PathWalker(const FlowFacts& facts, std::size_t budget)
      : facts_(facts), budget_(budget), on_path_(facts.num_blocks, 0) {}

  std::vector<Edge> Run() {
    for (int b = 0; b < facts_.num_blocks; ++b) {
      const auto& written = facts_.blocks[b].written;
      if (std::none_of(written.begin(), written.end(),
                       [](char c) { return c != 0; })) {
        continue;
      }
      source_ = b;
      on_path_[b] = 1;
      for (int s : facts_.successors[b]) {
        if (!on_path_[s]) Visit(s, written);
      }
      on_path_[b] = 0;
    }
    return Normalize(std::move(edges_));
  }

 private:
  // `live` holds the locations written by source_ that no block on the
  // current path has redefined.
  void Visit(int node, const std::vector<char>& live) {
    if (++visited_ > budget_) {
      throw PathExplosion("simple-path budget exceeded");
    }
    const BlockSummary& s = facts_.blocks[node];
    std::vector<char> next(live.size(), 0);
    bool any = false;
    bool linked = false;
    for (std::size_t l = 0; l < live.size(); ++l) {
      if (!live[l]) continue;
      if (s.upward_exposed[l] && !linked) {
        edges_.push_back({source_, node});
        linked = true;
      }
      if (!s.written[l]) {
        next[l] = 1;
        any = true;
      }
    }
    if (!any) return;
    on_path_[node] = 1;
    for (int succ : facts_.successors[node]) {
      if (!on_path_[succ]) Visit(succ, next);
    }
    on_path_[node] = 0;
  }

  const FlowFacts& facts_;
  std::size_t budget_;
  std::size_t visited_ = 0;
  int source_ = 0;
  std::vector<char> on_path_;
  std::vector<Edge> edges_;
};

FeatureVector Mask(const FeatureVector& in, FeatureSet set) {
  FeatureVector out = in;
  auto zero = [&](FeatureCategory c) { out[static_cast<int>(c)] = 0; };
  switch (set) {
    case FeatureSet::kAll:
      break;
    case FeatureSet::kZero:
      out.fill(0);
      break;
    case FeatureSet::kNoGeneric:
      zero(FeatureCategory::kGeneric);
      break;
    case FeatureSet::kControlOnly:
      zero(FeatureCategory::kStack);
      zero(FeatureCategory::kArithmetic);
      zero(FeatureCategory::kLogical);
      zero(FeatureCategory::kGeneric);
      break;
  }
  return out;
}

}  // namespace

FeatureVector ExtractFeatures(const BasicBlock& block,
                              const ArchProfile& profile) {
  FeatureVector counts{};
  for (const Instruction& instr : block.instructions) {
    ++counts[static_cast<int>(Categorize(instr, profile))];
  }
  return counts;
}

std::vector<Edge> InferDfgByPaths(const FunctionRecord& f,
                                  const ArchProfile& profile,
                                  std::size_t path_budget) {
  FlowFacts facts = Summarize(f, profile);
  return PathWalker(facts, path_budget).Run();
}

std::vector<Edge> InferDfgByReachingDefinitions(const FunctionRecord& f,
                                                const ArchProfile& profile) {
  FlowFacts facts = Summarize(f, profile);
  const int nb = facts.num_blocks;
  const int nl = facts.num_locations;
  // reach_in[b][d * nl + l]: location l as defined by block d reaches b.
  std::vector<std::vector<char>> reach_in(nb, std::vector<char>(nb * nl, 0));
  std::vector<std::vector<int>> preds(nb);
  for (int b = 0; b < nb; ++b) {
    for (int s : facts.successors[b]) preds[s].push_back(b);
  }
  auto out_of = [&](int b, std::vector<char>* out) {
    const BlockSummary& s = facts.blocks[b];
    *out = reach_in[b];
    for (int l = 0; l < nl; ++l) {
      if (!s.written[l]) continue;
      for (int d = 0; d < nb; ++d) (*out)[d * nl + l] = 0;
      (*out)[b * nl + l] = 1;
    }
  };
  bool changed = true;
  std::vector<char> out;
  while (changed) {
    changed = false;
    for (int b = 0; b < nb; ++b) {
      std::vector<char>& in = reach_in[b];
      for (int p : preds[b]) {
        out_of(p, &out);
        for (std::size_t k = 0; k < out.size(); ++k) {
          if (out[k] && !in[k]) {
            in[k] = 1;
            changed = true;
          }
        }
      }
    }
  }
  std::vector<Edge> edges;
  for (int b = 0; b < nb; ++b) {
    const BlockSummary& s = facts.blocks[b];
    for (int d = 0; d < nb; ++d) {
      if (d == b) continue;
      for (int l = 0; l < nl; ++l) {
        if (s.upward_exposed[l] && reach_in[b][d * nl + l]) {
          edges.push_back({d, b});
          break;
        }
      }
    }
  }
  return Normalize(std::move(edges));
}

std::vector<Edge> InferDfg(const FunctionRecord& f,
                           const ArchProfile& profile) {
  try {
    return InferDfgByPaths(f, profile);
  } catch (const PathExplosion&) {
    return InferDfgByReachingDefinitions(f, profile);
  }
}

Lsfg BuildLsfg(const FunctionRecord& f, const ArchProfile& profile) {
  Lsfg g;
  g.function_id = f.id;
  for (const BasicBlock& b : f.blocks) {
    g.block_ids.push_back(b.id);
    g.features.push_back(ExtractFeatures(b, profile));
  }
  for (const auto& [src, dst] : f.cfg_edges) {
    g.control_edges.push_back({f.BlockIndex(src), f.BlockIndex(dst)});
  }
  g.data_edges = InferDfg(f, profile);
  return g;
}

Lsfg BuildLsfg(const FunctionRecord& f) {
  return BuildLsfg(f, ProfileFor(f.arch));
}

const char* GraphVariantName(GraphVariant variant) {
  switch (variant) {
    case GraphVariant::kLsfg: return "lsfg";
    case GraphVariant::kCfgOnly: return "cfg-only";
    case GraphVariant::kDfgOnly: return "dfg-only";
  }
  return "?";
}

const char* FeatureSetName(FeatureSet set) {
  switch (set) {
    case FeatureSet::kAll: return "all";
    case FeatureSet::kZero: return "zero";
    case FeatureSet::kNoGeneric: return "no-generic";
    case FeatureSet::kControlOnly: return "control-only";
  }
  return "?";
}

Lsfg ApplyVariant(Lsfg graph, GraphVariant variant, FeatureSet features) {
  if (variant == GraphVariant::kCfgOnly) graph.data_edges.clear();
  if (variant == GraphVariant::kDfgOnly) graph.control_edges.clear();
  for (FeatureVector& x : graph.features) x = Mask(x, features);
  return graph;
}

std::string DumpLsfg(const Lsfg& graph) {
  std::ostringstream out;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    out << "v " << graph.block_ids[v];
    for (std::int32_t c : graph.features[v]) out << ' ' << c;
    out << '\n';
  }
  for (const Edge& e : graph.control_edges) {
    out << "e " << graph.block_ids[e.src] << ' ' << graph.block_ids[e.dst]
        << " 0\n";
  }
  for (const Edge& e : graph.data_edges) {
    out << "e " << graph.block_ids[e.src] << ' ' << graph.block_ids[e.dst]
        << " 1\n";
  }
  return out.str();
}

}  // namespace binseeker
