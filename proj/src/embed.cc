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

#include "binseeker/embed.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "binseeker/error.h"
#include "binseeker/eval.h"
#include "binseeker/kernels.h"

namespace binseeker {
namespace {

void CheckDims(const ModelParams& m, const EmbedConfig& cfg) {
  const Eigen::Index p = cfg.embedding_size;
  if (m.w1.rows() != kFeatureDim || m.w1.cols() != p) {
    throw DimensionMismatch("W1 must be " + std::to_string(kFeatureDim) +
                            " x " + std::to_string(p));
  }
  if (m.w2.rows() != p || m.w2.cols() != p) {
    throw DimensionMismatch("W2 must be p x p");
  }
  if (m.depth() != cfg.depth || m.q.size() != m.p.size()) {
    throw DimensionMismatch("P and Q must both hold n matrices");
  }
  for (const auto* list : {&m.p, &m.q}) {
    for (const Matrix& a : *list) {
      if (a.rows() != p || a.cols() != p) {
        throw DimensionMismatch("P_k and Q_k must be p x p");
      }
    }
  }
}

void CheckGraph(const Lsfg& g) {
  const int v = g.num_vertices();
  if (static_cast<int>(g.features.size()) != v) {
    throw DimensionMismatch("graph has " + std::to_string(g.features.size()) +
                            " feature rows for " + std::to_string(v) +
                            " vertices");
  }
  for (const auto* list : {&g.control_edges, &g.data_edges}) {
    for (const Edge& e : *list) {
      if (e.src < 0 || e.src >= v || e.dst < 0 || e.dst >= v) {
        throw DimensionMismatch("edge endpoint out of range");
      }
    }
  }
}

// Activations kept for the backward pass. Round r (0-based) reads u[r] and
// writes u[r + 1].
struct Tape {
  Matrix x;
  std::vector<Matrix> u;
  std::vector<Matrix> lc, ld;
  std::vector<std::vector<Matrix>> zc, zd;
  RowVector s;
  RowVector out;
};

Matrix Aggregate(const Matrix& u, const std::vector<Edge>& edges) {
  Matrix l = Matrix::Zero(u.rows(), u.cols());
  for (const Edge& e : edges) l.row(e.dst) += u.row(e.src);
  return l;
}

void Scatter(const Matrix& g_l, const std::vector<Edge>& edges, Matrix* g_u) {
  for (const Edge& e : edges) g_u->row(e.src) += g_l.row(e.dst);
}

// Rows of l go through Pn first and P1 last; z[k] is the output of layer
// k + 1 before any ReLU, and z[0] is sigma itself.
const Matrix& SigmaForward(const Matrix& l, const std::vector<Matrix>& mats,
                           std::vector<Matrix>* z) {
  const std::size_t n = mats.size();
  z->assign(n, Matrix());
  (*z)[n - 1] = l * mats[n - 1].transpose();
  for (std::size_t k = n - 1; k-- > 0;) {
    (*z)[k] = (*z)[k + 1].cwiseMax(0.0) * mats[k].transpose();
  }
  return (*z)[0];
}

// Returns dLoss/dl and accumulates dLoss/dmats into d_mats.
Matrix SigmaBackward(Matrix g, const Matrix& l, const std::vector<Matrix>& mats,
                     const std::vector<Matrix>& z, std::vector<Matrix>* d_mats) {
  const std::size_t n = mats.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 < n) {
      const Matrix in = z[k + 1].cwiseMax(0.0);
      (*d_mats)[k].noalias() += g.transpose() * in;
      Matrix g_in = g * mats[k];
      g = g_in.cwiseProduct(
          (z[k + 1].array() > 0.0).cast<double>().matrix());
    } else {
      (*d_mats)[k].noalias() += g.transpose() * l;
      g = g * mats[k];
    }
  }
  return g;
}

Tape Forward(const Lsfg& g, const ModelParams& m, const EmbedConfig& cfg) {
  CheckDims(m, cfg);
  CheckGraph(g);
  const int v = g.num_vertices();
  const int p = cfg.embedding_size;
  const int t_max = cfg.iterations;
  if (t_max < 1) throw DimensionMismatch("iterations must be >= 1");
  Tape tape;
  tape.x.resize(v, kFeatureDim);
  for (int i = 0; i < v; ++i) {
    for (int c = 0; c < kFeatureDim; ++c) tape.x(i, c) = g.features[i][c];
  }
  const Matrix base = tape.x * m.w1;
  tape.u.assign(1, Matrix::Zero(v, p));
  tape.lc.resize(t_max);
  tape.ld.resize(t_max);
  tape.zc.resize(t_max);
  tape.zd.resize(t_max);
  for (int r = 0; r < t_max; ++r) {
    tape.lc[r] = Aggregate(tape.u[r], g.control_edges);
    tape.ld[r] = Aggregate(tape.u[r], g.data_edges);
    Matrix pre = base;
    pre += SigmaForward(tape.lc[r], m.p, &tape.zc[r]);
    pre += SigmaForward(tape.ld[r], m.q, &tape.zd[r]);
    tape.u.push_back(pre.array().tanh().matrix());
  }
  tape.s = tape.u.back().colwise().sum();
  tape.out = tape.s * m.w2;
  return tape;
}

void Backward(const Lsfg& g, const ModelParams& m, const Tape& tape,
              const RowVector& g_out, ModelParams* grad) {
  const int t_max = static_cast<int>(tape.lc.size());
  grad->w2.noalias() += tape.s.transpose() * g_out;
  const RowVector g_s = g_out * m.w2.transpose();
  Matrix g_u = g_s.replicate(tape.u.back().rows(), 1);
  for (int r = t_max - 1; r >= 0; --r) {
    const Matrix& u = tape.u[r + 1];
    const Matrix g_pre =
        g_u.cwiseProduct((1.0 - u.array().square()).matrix());
    grad->w1.noalias() += tape.x.transpose() * g_pre;
    const Matrix g_lc =
        SigmaBackward(g_pre, tape.lc[r], m.p, tape.zc[r], &grad->p);
    const Matrix g_ld =
        SigmaBackward(g_pre, tape.ld[r], m.q, tape.zd[r], &grad->q);
    g_u.setZero();
    Scatter(g_lc, g.control_edges, &g_u);
    Scatter(g_ld, g.data_edges, &g_u);
  }
}

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

void EmbedConfig::Validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (embedding_size < 1) {
    throw std::invalid_argument("embedding size must be >= 1");
  }
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning rate must be finite and >= 0");
  }
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
}

ModelParams ModelParams::ZerosLike() const {
  ModelParams z;
  z.w1 = Matrix::Zero(w1.rows(), w1.cols());
  z.w2 = Matrix::Zero(w2.rows(), w2.cols());
  for (const Matrix& a : p) z.p.push_back(Matrix::Zero(a.rows(), a.cols()));
  for (const Matrix& a : q) z.q.push_back(Matrix::Zero(a.rows(), a.cols()));
  return z;
}

std::vector<Matrix*> ModelParams::Matrices() {
  std::vector<Matrix*> out = {&w1, &w2};
  for (Matrix& a : p) out.push_back(&a);
  for (Matrix& a : q) out.push_back(&a);
  return out;
}

std::vector<const Matrix*> ModelParams::Matrices() const {
  std::vector<const Matrix*> out = {&w1, &w2};
  for (const Matrix& a : p) out.push_back(&a);
  for (const Matrix& a : q) out.push_back(&a);
  return out;
}

bool ModelParams::AllFinite() const {
  for (const Matrix* a : Matrices()) {
    if (!a->allFinite()) return false;
  }
  return true;
}

std::size_t ModelParams::ParameterCount() const {
  std::size_t n = 0;
  for (const Matrix* a : Matrices()) n += static_cast<std::size_t>(a->size());
  return n;
}

void ModelParams::AddScaled(const ModelParams& other, double scale) {
  auto mine = Matrices();
  auto theirs = other.Matrices();
  if (mine.size() != theirs.size()) throw DimensionMismatch("depth differs");
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (mine[i]->rows() != theirs[i]->rows() ||
        mine[i]->cols() != theirs[i]->cols()) {
      throw DimensionMismatch("matrix shapes differ");
    }
    *mine[i] += scale * *theirs[i];
  }
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  auto ma = a.Matrices();
  auto mb = b.Matrices();
  if (ma.size() != mb.size()) return false;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    if (ma[i]->rows() != mb[i]->rows() || ma[i]->cols() != mb[i]->cols()) {
      return false;
    }
    if (*ma[i] != *mb[i]) return false;
  }
  return true;
}

ModelParams InitParams(const EmbedConfig& cfg, int feature_dim) {
  cfg.Validate();
  const int p = cfg.embedding_size;
  const double bound = 1.0 / std::sqrt(static_cast<double>(p));
  std::mt19937_64 rng(cfg.seed);
  auto fill = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        a(i, j) = -bound + 2.0 * bound * unit;
      }
    }
    return a;
  };
  ModelParams m;
  m.w1 = fill(feature_dim, p);
  m.w2 = fill(p, p);
  for (int k = 0; k < cfg.depth; ++k) m.p.push_back(fill(p, p));
  for (int k = 0; k < cfg.depth; ++k) m.q.push_back(fill(p, p));
  return m;
}

RowVector Embed(const Lsfg& graph, const ModelParams& params,
                const EmbedConfig& cfg) {
  return Forward(graph, params, cfg).out;
}

double Cosine(const RowVector& u, const RowVector& v) {
  if (u.size() != v.size()) throw DimensionMismatch("cosine operand sizes");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return u.dot(v) / (nu * nv);
}

double PairLoss(std::span<const LabeledPair> pairs, const ModelParams& params,
                const EmbedConfig& cfg) {
  double total = 0.0;
  for (const LabeledPair& pair : pairs) {
    const double y = Cosine(Embed(*pair.g1, params, cfg),
                            Embed(*pair.g2, params, cfg));
    total += (y - pair.label) * (y - pair.label);
  }
  return total;
}

PairGradient Grad(const LabeledPair& pair, const ModelParams& params,
                  const EmbedConfig& cfg) {
  const Tape t1 = Forward(*pair.g1, params, cfg);
  const Tape t2 = Forward(*pair.g2, params, cfg);
  PairGradient out;
  out.grad = params.ZerosLike();
  const double n1 = t1.out.norm();
  const double n2 = t2.out.norm();
  if (n1 == 0.0 || n2 == 0.0) {
    out.similarity = 0.0;
    out.loss = static_cast<double>(pair.label) * pair.label;
    return out;
  }
  const double y = t1.out.dot(t2.out) / (n1 * n2);
  const double diff = y - pair.label;
  out.similarity = y;
  out.loss = diff * diff;
  const double dl_dy = 2.0 * diff;
  const RowVector g1 = dl_dy * (t2.out / (n1 * n2) - y * t1.out / (n1 * n1));
  const RowVector g2 = dl_dy * (t1.out / (n1 * n2) - y * t2.out / (n2 * n2));
  Backward(*pair.g1, params, t1, g1, &out.grad);
  Backward(*pair.g2, params, t2, g2, &out.grad);
  return out;
}

TrainResult Train(std::span<const LabeledPair> train,
                  std::span<const LabeledPair> validation,
                  const EmbedConfig& cfg, const ModelParams* initial) {
  cfg.Validate();
  if (train.empty()) throw std::invalid_argument("no training pairs");
  TrainResult result;
  result.params = initial ? *initial : InitParams(cfg);
  CheckDims(result.params, cfg);
  std::mt19937_64 shuffler(cfg.seed ^ 0x5eedf00dULL);
  std::vector<std::size_t> order(train.size());
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), shuffler);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::span<const std::size_t> batch(order.data() + start, end - start);
      BatchGradient step =
          ComputeBatchGradient(train, batch, result.params, cfg);
      loss_sum += step.loss_sum;
      if (cfg.learning_rate != 0.0) {
        result.params.AddScaled(step.mean_grad, -cfg.learning_rate);
      }
    }
    EpochTrace row;
    row.epoch = epoch;
    row.train_loss = loss_sum / static_cast<double>(train.size());
    row.validation_auc = std::numeric_limits<double>::quiet_NaN();
    if (!validation.empty()) {
      const std::vector<double> scores =
          PairSimilarities(validation, result.params, cfg);
      std::vector<ScoredPair> scored;
      for (std::size_t i = 0; i < validation.size(); ++i) {
        scored.push_back({scores[i], validation[i].label});
      }
      try {
        row.validation_auc = RocAuc(scored).auc;
      } catch (const SingleClassInput&) {
      }
    }
    result.trace.push_back(row);
  }
  return result;
}

std::string FormatTrace(const std::vector<EpochTrace>& trace) {
  std::ostringstream out;
  out << "epoch train_loss validation_auc\n";
  for (const EpochTrace& row : trace) {
    out << row.epoch << ' ' << FormatDouble(row.train_loss) << ' '
        << (std::isnan(row.validation_auc) ? std::string("nan")
                                           : FormatDouble(row.validation_auc))
        << '\n';
  }
  return out.str();
}

std::string SerializeModel(const EmbedConfig& cfg, const ModelParams& params) {
  CheckDims(params, cfg);
  if (!params.AllFinite()) throw MalformedModel("parameters are not finite");
  std::ostringstream out;
  out << "BSKMODEL 1\n";
  out << "iterations " << cfg.iterations << '\n';
  out << "embedding_size " << cfg.embedding_size << '\n';
  out << "depth " << cfg.depth << '\n';
  out << "learning_rate " << FormatDouble(cfg.learning_rate) << '\n';
  out << "epochs " << cfg.epochs << '\n';
  out << "batch_size " << cfg.batch_size << '\n';
  out << "seed " << cfg.seed << '\n';
  auto emit = [&](const std::string& name, const Matrix& a) {
    out << name << ' ' << a.rows() << ' ' << a.cols() << '\n';
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (j) out << ' ';
        out << FormatDouble(a(i, j));
      }
      out << '\n';
    }
  };
  emit("W1", params.w1);
  emit("W2", params.w2);
  for (std::size_t k = 0; k < params.p.size(); ++k) {
    emit("P" + std::to_string(k + 1), params.p[k]);
  }
  for (std::size_t k = 0; k < params.q.size(); ++k) {
    emit("Q" + std::to_string(k + 1), params.q[k]);
  }
  return out.str();
}

namespace {

class ModelReader {
 public:
  explicit ModelReader(std::string_view text) : text_(text) {}

  std::string_view Line() {
    if (pos_ >= text_.size()) throw MalformedModel("unexpected end of model");
    const std::size_t nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) {
      throw MalformedModel("model lines must end with a newline");
    }
    std::string_view line = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    ++line_no_;
    return line;
  }

  bool AtEnd() const { return pos_ == text_.size(); }

  std::vector<std::string_view> Fields() {
    std::string_view line = Line();
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i <= line.size()) {
      std::size_t sp = line.find(' ', i);
      if (sp == std::string_view::npos) sp = line.size();
      if (sp == i) Fail("empty field");
      out.push_back(line.substr(i, sp - i));
      i = sp + 1;
    }
    return out;
  }

  template <typename T>
  T Number(std::string_view token) {
    T value{};
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      Fail("bad number '" + std::string(token) + "'");
    }
    return value;
  }

  template <typename T>
  T Keyed(std::string_view key) {
    auto f = Fields();
    if (f.size() != 2 || f[0] != key) Fail("expected '" + std::string(key) + "'");
    return Number<T>(f[1]);
  }

  Matrix ReadMatrix(const std::string& name, Eigen::Index rows,
                    Eigen::Index cols) {
    auto head = Fields();
    if (head.size() != 3 || head[0] != name) Fail("expected matrix " + name);
    if (Number<long>(head[1]) != rows || Number<long>(head[2]) != cols) {
      Fail("matrix " + name + " has the wrong shape");
    }
    Matrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      auto row = Fields();
      if (static_cast<Eigen::Index>(row.size()) != cols) {
        Fail("matrix " + name + " row width");
      }
      for (Eigen::Index j = 0; j < cols; ++j) {
        a(i, j) = Number<double>(row[j]);
      }
    }
    return a;
  }

  [[noreturn]] void Fail(const std::string& what) {
    throw MalformedModel("model line " + std::to_string(line_no_) + ": " +
                         what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

}  // namespace

Model ParseModel(std::string_view content) {
  ModelReader in(content);
  auto header = in.Fields();
  if (header.size() != 2 || header[0] != "BSKMODEL") {
    in.Fail("missing BSKMODEL header");
  }
  if (header[1] != "1") {
    in.Fail("unsupported model version " + std::string(header[1]));
  }
  Model m;
  m.cfg.iterations = in.Keyed<int>("iterations");
  m.cfg.embedding_size = in.Keyed<int>("embedding_size");
  m.cfg.depth = in.Keyed<int>("depth");
  m.cfg.learning_rate = in.Keyed<double>("learning_rate");
  m.cfg.epochs = in.Keyed<int>("epochs");
  m.cfg.batch_size = in.Keyed<int>("batch_size");
  m.cfg.seed = in.Keyed<std::uint64_t>("seed");
  try {
    m.cfg.Validate();
  } catch (const std::invalid_argument& e) {
    in.Fail(e.what());
  }
  const int p = m.cfg.embedding_size;
  m.params.w1 = in.ReadMatrix("W1", kFeatureDim, p);
  m.params.w2 = in.ReadMatrix("W2", p, p);
  for (int k = 1; k <= m.cfg.depth; ++k) {
    m.params.p.push_back(in.ReadMatrix("P" + std::to_string(k), p, p));
  }
  for (int k = 1; k <= m.cfg.depth; ++k) {
    m.params.q.push_back(in.ReadMatrix("Q" + std::to_string(k), p, p));
  }
  if (!in.AtEnd()) in.Fail("trailing content");
  if (!m.params.AllFinite()) in.Fail("non-finite parameter");
  return m;
}

void SaveModel(const std::string& path, const EmbedConfig& cfg,
               const ModelParams& params) {
  const std::string text = SerializeModel(cfg, params);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

Model LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedModel("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseModel(buffer.str());
}

}  // namespace binseeker
