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

// Graph embedding network over LSFGs and its Siamese training loop.
//
// For T rounds every vertex i is updated from its own features and the
// previous-round embeddings of its control parents and data parents:
//
//   mu_i <- tanh(x_i W1 + sigma_c(sum_{j in C(i)} mu_j)
//                       + sigma_d(sum_{j in D(i)} mu_j))
//   sigma_c(l) = P1 ReLU(P2 ... ReLU(Pn l)),  sigma_d likewise with Q
//
// and the function embedding is W2^T (sum_i mu_i). Feature vectors are rows,
// so W1 is d x p and every P_k, Q_k is p x p acting on column vectors.

#ifndef BINSEEKER_EMBED_H_
#define BINSEEKER_EMBED_H_

#ifndef EIGEN_DONT_PARALLELIZE
#define EIGEN_DONT_PARALLELIZE
#endif

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binseeker/lsfg.h"

namespace binseeker {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr int kFeatureDim = kNumFeatureCategories;

// Defaults: T=6 rounds, p=64, depth n=2, lr=1e-4, 100 epochs, batch 10.
struct EmbedConfig {
  int iterations = 6;
  int embedding_size = 64;
  int depth = 2;
  double learning_rate = 1e-4;
  int epochs = 100;
  int batch_size = 10;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument on a violated bound.
  void Validate() const;
  friend bool operator==(const EmbedConfig&, const EmbedConfig&) = default;
};

struct ModelParams {
  Matrix w1;               // d x p
  Matrix w2;               // p x p
  std::vector<Matrix> p;   // P1..Pn, p x p
  std::vector<Matrix> q;   // Q1..Qn, p x p

  int feature_dim() const { return static_cast<int>(w1.rows()); }
  int embedding_size() const { return static_cast<int>(w2.rows()); }
  int depth() const { return static_cast<int>(p.size()); }

  ModelParams ZerosLike() const;
  bool AllFinite() const;
  std::size_t ParameterCount() const;
  // this += scale * other
  void AddScaled(const ModelParams& other, double scale);

  // Flat views in the fixed order W1, W2, P1..Pn, Q1..Qn (column-major
  // inside each matrix). Used by gradient checks.
  std::vector<Matrix*> Matrices();
  std::vector<const Matrix*> Matrices() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b);
};

// Entries i.i.d. uniform on [-1/sqrt(p), 1/sqrt(p)], drawn in the order
// W1, W2, P1..Pn, Q1..Qn, row-major, from a generator seeded with cfg.seed.
ModelParams InitParams(const EmbedConfig& cfg, int feature_dim = kFeatureDim);

// Throws DimensionMismatch when params disagree with cfg or the graph.
RowVector Embed(const Lsfg& graph, const ModelParams& params,
                const EmbedConfig& cfg);

// 0 when either vector has zero norm.
double Cosine(const RowVector& u, const RowVector& v);

// The graphs are borrowed; they must outlive the pair.
struct LabeledPair {
  const Lsfg* g1 = nullptr;
  const Lsfg* g2 = nullptr;
  int label = 1;  // +1 similar, -1 dissimilar
};

// sum over pairs of (cosine(embed(g1), embed(g2)) - y)^2
double PairLoss(std::span<const LabeledPair> pairs, const ModelParams& params,
                const EmbedConfig& cfg);

struct PairGradient {
  ModelParams grad;
  double loss = 0.0;
  double similarity = 0.0;
};

// Exact gradient of (y_hat - y)^2 with both branches sharing params.
PairGradient Grad(const LabeledPair& pair, const ModelParams& params,
                  const EmbedConfig& cfg);

struct EpochTrace {
  int epoch = 0;
  double train_loss = 0.0;       // mean per-pair loss seen during the epoch
  double validation_auc = 0.0;   // NaN without a validation set
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochTrace> trace;
};

// Mini-batch SGD on the mean batch gradient, reshuffling every epoch.
// `initial` overrides InitParams(cfg) when non-null.
TrainResult Train(std::span<const LabeledPair> train,
                  std::span<const LabeledPair> validation,
                  const EmbedConfig& cfg,
                  const ModelParams* initial = nullptr);

std::string FormatTrace(const std::vector<EpochTrace>& trace);

// Model file: "BSKMODEL 1", config lines, then W1, W2, P1..Pn, Q1..Qn as
// "<name> <rows> <cols>" headers followed by row-major rows printed with 17
// significant digits.
struct Model {
  EmbedConfig cfg;
  ModelParams params;
};
std::string SerializeModel(const EmbedConfig& cfg, const ModelParams& params);
Model ParseModel(std::string_view content);  // throws MalformedModel
void SaveModel(const std::string& path, const EmbedConfig& cfg,
               const ModelParams& params);
Model LoadModel(const std::string& path);

}  // namespace binseeker

#endif  // BINSEEKER_EMBED_H_
