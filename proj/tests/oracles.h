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


// Independent reference implementations used by the unit and acceptance
// tests.

#ifndef BINSEEKER_TESTS_ORACLES_H_
#define BINSEEKER_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "binseeker/embed.h"
#include "binseeker/eval.h"
#include "binseeker/func_model.h"
#include "binseeker/lsfg.h"
#include "binseeker/profiles.h"

namespace binseeker::testing {

using Vec = std::vector<double>;

// Plain-loop forward pass, independent of the Eigen implementation.
inline Vec OracleEmbed(const Lsfg& g, const ModelParams& m, int rounds) {
  const int n = g.num_vertices();
  const int d = m.feature_dim();
  const int p = m.embedding_size();
  auto sigma = [&](const std::vector<Matrix>& layers, const Vec& l) {
    Vec v = l;
    for (int k = static_cast<int>(layers.size()) - 1; k >= 0; --k) {
      Vec next(p, 0.0);
      for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) next[r] += layers[k](r, c) * v[c];
      }
      if (k > 0) {
        for (double& x : next) x = std::max(0.0, x);
      }
      v = next;
    }
    return v;
  };
  std::vector<Vec> mu(n, Vec(p, 0.0));
  for (int t = 0; t < rounds; ++t) {
    std::vector<Vec> lc(n, Vec(p, 0.0)), ld(n, Vec(p, 0.0));
    for (const Edge& e : g.control_edges) {
      for (int k = 0; k < p; ++k) lc[e.dst][k] += mu[e.src][k];
    }
    for (const Edge& e : g.data_edges) {
      for (int k = 0; k < p; ++k) ld[e.dst][k] += mu[e.src][k];
    }
    std::vector<Vec> next(n, Vec(p, 0.0));
    for (int i = 0; i < n; ++i) {
      const Vec sc = sigma(m.p, lc[i]);
      const Vec sd = sigma(m.q, ld[i]);
      for (int k = 0; k < p; ++k) {
        double pre = sc[k] + sd[k];
        for (int j = 0; j < d; ++j) pre += g.features[i][j] * m.w1(j, k);
        next[i][k] = std::tanh(pre);
      }
    }
    mu = next;
  }
  Vec out(p, 0.0);
  for (int k = 0; k < p; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += mu[i][k];
    for (int c = 0; c < p; ++c) out[c] += s * m.w2(k, c);
  }
  return out;
}

// Every simple path from `from` that reaches `to` without passing through a
// writer of `loc`.
inline std::vector<Edge> OracleDfg(const FunctionRecord& f, const ArchProfile& p) {
  const int n = static_cast<int>(f.blocks.size());
  std::vector<std::vector<int>> succ(n);
  for (const auto& [a, b] : f.cfg_edges) {
    succ[f.BlockIndex(a)].push_back(f.BlockIndex(b));
  }
  std::vector<std::set<std::string>> writes(n), exposed(n);
  for (int b = 0; b < n; ++b) {
    for (const Instruction& ins : f.blocks[b].instructions) {
      const Accesses acc = EffectiveAccesses(ins, p);
      for (const std::string& r : acc.reads) {
        const std::string c = ParseLocation(r)->Canonical();
        if (!writes[b].count(c)) exposed[b].insert(c);
      }
      for (const std::string& w : acc.writes) {
        writes[b].insert(ParseLocation(w)->Canonical());
      }
    }
  }
  std::set<Edge> out;
  for (int b = 0; b < n; ++b) {
    for (const std::string& loc : writes[b]) {
      std::vector<char> on_path(n, 0);
      on_path[b] = 1;
      std::function<void(int)> walk = [&](int v) {
        for (int w : succ[v]) {
          if (on_path[w]) continue;
          if (exposed[w].count(loc) && w != b) out.insert({b, w});
          if (writes[w].count(loc)) continue;
          on_path[w] = 1;
          walk(w);
          on_path[w] = 0;
        }
      };
      walk(b);
    }
  }
  return {out.begin(), out.end()};
}

// Direct pairwise count over every (positive, negative) combination.
inline double OracleAuc(std::span<const ScoredPair> pairs) {
  double wins = 0.0;
  double total = 0.0;
  for (const ScoredPair& p : pairs) {
    if (p.label <= 0) continue;
    for (const ScoredPair& n : pairs) {
      if (n.label > 0) continue;
      total += 1.0;
      if (p.score > n.score) wins += 1.0;
      if (p.score == n.score) wins += 0.5;
    }
  }
  return wins / total;
}

// Norm-wise relative error between Grad and central differences of PairLoss.
// The denominator is floored at 1e-8 so an exactly zero gradient (p = 1,
// where the cosine is constant) compares rounding noise against that floor.
inline double GradientCheckError(const LabeledPair& pair, ModelParams m,
                                 const EmbedConfig& cfg, double h = 1e-5) {
  const PairGradient pg = Grad(pair, m, cfg);
  const std::vector<const Matrix*> grads = pg.grad.Matrices();
  std::vector<Matrix*> mats = m.Matrices();
  double diff2 = 0.0, norm2 = 0.0;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    for (Eigen::Index i = 0; i < mats[k]->size(); ++i) {
      double& w = mats[k]->data()[i];
      const double saved = w;
      w = saved + h;
      const double up = PairLoss({&pair, 1}, m, cfg);
      w = saved - h;
      const double down = PairLoss({&pair, 1}, m, cfg);
      w = saved;
      const double numeric = (up - down) / (2 * h);
      const double analytic = grads[k]->data()[i];
      diff2 += (numeric - analytic) * (numeric - analytic);
      norm2 += std::max(numeric * numeric, analytic * analytic);
    }
  }
  return std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-8);
}

}  // namespace binseeker::testing

#endif  // BINSEEKER_TESTS_ORACLES_H_
