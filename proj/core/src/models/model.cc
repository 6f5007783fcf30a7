// Copyright 2026 The latentsynth Authors.
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

#include "latentsynth/models/model.h"

#include <cmath>
#include <numbers>
#include <string>

namespace latentsynth::models {
namespace {

using nn::Graph;

nn::DenseParams Dense(const std::string& name, int in, int out, nn::Activation act,
                      nn::Rng* rng) {
  return rng ? nn::MakeDense(name, in, out, act, *rng) : nn::MakeZeroDense(name, in, out, act);
}

nn::LstmParams Lstm(const std::string& name, int in, int hidden, nn::Rng* rng) {
  return rng ? nn::MakeLstm(name, in, hidden, *rng) : nn::MakeZeroLstm(name, in, hidden);
}

void CheckCols(const Matrix& m, int want, const char* what) {
  if (m.cols() != want) {
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(want) +
                          " columns, got " + std::to_string(m.cols()));
  }
}

}  // namespace

Model Model::Create(const ArchSpec& arch, std::uint64_t seed) {
  arch.Validate();
  Model m(arch);
  nn::Rng rng(seed);
  m.Build(&rng);
  return m;
}

Model Model::CreateZero(const ArchSpec& arch) {
  arch.Validate();
  Model m(arch);
  m.Build(nullptr);
  return m;
}

void Model::Build(nn::Rng* rng) {
  const std::vector<int>& s = arch_.layer_sizes;
  const int layers = static_cast<int>(s.size());
  const int mid = layers / 2;
  const nn::Activation hidden = arch_.hidden_activation;
  switch (arch_.kind) {
    case ModelKind::kPca:
      return;
    case ModelKind::kLstmAe:
      encoder_lstm_ = Lstm("enc_lstm", s[0], s[1], rng);
      decoder_lstm_ = Lstm("dec_lstm", s[1], s[2], rng);
      return;
    case ModelKind::kAe:
    case ModelKind::kDae:
      for (int i = 0; i < mid; ++i) {
        encoder_.push_back(Dense("enc" + std::to_string(i), s[i], s[i + 1], hidden, rng));
      }
      break;
    case ModelKind::kVae:
      for (int i = 0; i + 1 < mid; ++i) {
        encoder_.push_back(Dense("enc" + std::to_string(i), s[i], s[i + 1], hidden, rng));
      }
      mu_head_ = Dense("mu", s[mid - 1], s[mid], nn::Activation::kLinear, rng);
      log_var_head_ = Dense("logvar", s[mid - 1], s[mid], nn::Activation::kLinear, rng);
      break;
  }
  for (int j = 0; j < mid; ++j) {
    const nn::Activation act = j == mid - 1 ? arch_.output_activation : hidden;
    decoder_.push_back(
        Dense("dec" + std::to_string(j), s[mid + j], s[mid + j + 1], act, rng));
  }
  if (arch_.kind == ModelKind::kVae && arch_.decoder_variance == DecoderVariance::kLearned) {
    out_log_var_head_ = Dense("out_logvar", s[layers - 2], s[layers - 1],
                              nn::Activation::kLinear, rng);
  }
}

std::vector<nn::Parameter*> Model::parameters() {
  std::vector<nn::Parameter*> out;
  auto add_dense = [&out](nn::DenseParams& d) {
    out.push_back(&d.weight);
    out.push_back(&d.bias);
  };
  for (auto& d : encoder_) add_dense(d);
  if (arch_.kind == ModelKind::kVae) {
    add_dense(mu_head_);
    add_dense(log_var_head_);
  }
  for (auto& d : decoder_) add_dense(d);
  if (arch_.kind == ModelKind::kVae && arch_.decoder_variance == DecoderVariance::kLearned) {
    add_dense(out_log_var_head_);
  }
  if (arch_.kind == ModelKind::kLstmAe) {
    for (nn::Parameter* p : encoder_lstm_.parameters()) out.push_back(p);
    for (nn::Parameter* p : decoder_lstm_.parameters()) out.push_back(p);
  }
  return out;
}

std::vector<const nn::Parameter*> Model::parameters() const {
  std::vector<const nn::Parameter*> out;
  for (nn::Parameter* p : const_cast<Model*>(this)->parameters()) out.push_back(p);
  return out;
}

nn::Parameter* Model::FindParameter(const std::string& name) {
  for (nn::Parameter* p : parameters()) {
    if (p->name == name) return p;
  }
  return nullptr;
}

std::size_t Model::NumParameters() const {
  std::size_t n = 0;
  for (const nn::Parameter* p : parameters()) n += static_cast<std::size_t>(p->value.size());
  return n;
}

void Model::set_pca(pca::PcaModel model) {
  if (arch_.kind != ModelKind::kPca) throw InvalidArgument("set_pca on a non-PCA model");
  if (model.dim() != input_dim() || model.enc() != enc()) {
    throw InvalidArgument("pca model does not match the architecture");
  }
  pca_ = std::move(model);
}

Graph::Var Model::EncodeVar(Graph& g, Graph::Var x) const {
  switch (arch_.kind) {
    case ModelKind::kAe:
    case ModelKind::kDae: {
      Graph::Var h = x;
      for (const auto& layer : encoder_) h = nn::DenseForward(g, layer, h);
      return h;
    }
    case ModelKind::kVae: {
      Graph::Var mu, log_var;
      PosteriorVars(g, x, &mu, &log_var);
      return mu;
    }
    default:
      throw InvalidArgument(std::string("EncodeVar is not defined for ") + KindName(kind()));
  }
}

Graph::Var Model::DecodeVar(Graph& g, Graph::Var z) const {
  if (arch_.kind != ModelKind::kAe && arch_.kind != ModelKind::kDae &&
      arch_.kind != ModelKind::kVae) {
    throw InvalidArgument(std::string("DecodeVar is not defined for ") + KindName(kind()));
  }
  Graph::Var h = z;
  for (const auto& layer : decoder_) h = nn::DenseForward(g, layer, h);
  return h;
}

void Model::PosteriorVars(Graph& g, Graph::Var x, Graph::Var* mu, Graph::Var* log_var) const {
  if (arch_.kind != ModelKind::kVae) throw InvalidArgument("posterior of a non-VAE model");
  Graph::Var h = x;
  for (const auto& layer : encoder_) h = nn::DenseForward(g, layer, h);
  *mu = nn::DenseForward(g, mu_head_, h);
  *log_var = g.Clamp(nn::DenseForward(g, log_var_head_, h), kLogVarMin, kLogVarMax);
}

void Model::LikelihoodVars(Graph& g, Graph::Var z, Graph::Var* mu, Graph::Var* log_var) const {
  if (arch_.kind != ModelKind::kVae) throw InvalidArgument("likelihood of a non-VAE model");
  Graph::Var h = z;
  for (std::size_t j = 0; j + 1 < decoder_.size(); ++j) h = nn::DenseForward(g, decoder_[j], h);
  *mu = nn::DenseForward(g, decoder_.back(), h);
  if (arch_.decoder_variance == DecoderVariance::kLearned) {
    *log_var = g.Clamp(nn::DenseForward(g, out_log_var_head_, h), kLogVarMin, kLogVarMax);
  }
}

std::vector<Graph::Var> Model::SequenceVars(Graph& g, const std::vector<Graph::Var>& xs,
                                            std::vector<Graph::Var>* codes) const {
  if (arch_.kind != ModelKind::kLstmAe) throw InvalidArgument("sequence pass of a frame model");
  std::vector<Graph::Var> zs = nn::LstmForward(g, encoder_lstm_, xs);
  std::vector<Graph::Var> out = nn::LstmForward(g, decoder_lstm_, zs);
  if (codes) *codes = std::move(zs);
  return out;
}

Matrix Model::Encode(const Matrix& frames) const {
  CheckCols(frames, input_dim(), "encode");
  switch (arch_.kind) {
    case ModelKind::kPca:
      if (pca_.dim() != input_dim()) throw Error("pca model has not been fitted");
      return pca::Encode(pca_, frames);
    case ModelKind::kLstmAe:
      if (frames.rows() == 0) throw InvalidArgument("lstm_ae: empty sequence");
      return nn::LstmForward(encoder_lstm_, frames);
    default: {
      Graph g(Graph::Mode::kInference);
      return g.value(EncodeVar(g, g.Constant(frames)));
    }
  }
}

Matrix Model::Decode(const Matrix& codes) const {
  CheckCols(codes, enc(), "decode");
  switch (arch_.kind) {
    case ModelKind::kPca:
      if (pca_.dim() != input_dim()) throw Error("pca model has not been fitted");
      return pca::Decode(pca_, codes);
    case ModelKind::kLstmAe:
      if (codes.rows() == 0) throw InvalidArgument("lstm_ae: empty sequence");
      return nn::LstmForward(decoder_lstm_, codes);
    default: {
      Graph g(Graph::Mode::kInference);
      return g.value(DecodeVar(g, g.Constant(codes)));
    }
  }
}

Matrix Model::Reconstruct(const Matrix& frames) const { return Decode(Encode(frames)); }

double MseLoss(const Matrix& x, const Matrix& xhat) {
  if (x.rows() != xhat.rows() || x.cols() != xhat.cols()) {
    throw InvalidArgument("mse: shape mismatch");
  }
  if (x.size() == 0) return 0.0;
  return (x - xhat).squaredNorm() / static_cast<double>(x.size());
}

double KlToStandardNormal(const GaussianCode& g) {
  if (g.mu.rows() != g.log_var.rows() || g.mu.cols() != g.log_var.cols()) {
    throw InvalidArgument("kl: mu/log_var shape mismatch");
  }
  if (g.mu.rows() == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index r = 0; r < g.mu.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.mu.cols(); ++c) {
      const double lv = g.log_var(r, c);
      const double m = g.mu(r, c);
      total += -0.5 * (1.0 + lv - m * m - std::exp(lv));
    }
  }
  return total / static_cast<double>(g.mu.rows());
}

GaussianCode VaeEncode(const Model& model, const Matrix& x) {
  CheckCols(x, model.input_dim(), "vae encode");
  Graph g(Graph::Mode::kInference);
  Graph::Var mu, log_var;
  model.PosteriorVars(g, g.Constant(x), &mu, &log_var);
  return {g.value(mu), g.value(log_var)};
}

Matrix DrawStandardNormal(Eigen::Index rows, Eigen::Index cols, nn::Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix eps(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) eps(r, c) = normal(rng);
  }
  return eps;
}

Matrix VaeReparameterize(const GaussianCode& g, nn::Rng& rng) {
  if (g.mu.rows() != g.log_var.rows() || g.mu.cols() != g.log_var.cols()) {
    throw InvalidArgument("reparameterize: mu/log_var shape mismatch");
  }
  const Matrix eps = DrawStandardNormal(g.mu.rows(), g.mu.cols(), rng);
  const Matrix sd =
      (0.5 * g.log_var.array().max(kLogVarMin).min(kLogVarMax)).exp().matrix();
  return g.mu + sd.cwiseProduct(eps);
}

GaussianCode VaeDecode(const Model& model, const Matrix& z) {
  CheckCols(z, model.enc(), "vae decode");
  Graph g(Graph::Mode::kInference);
  Graph::Var mu, log_var;
  model.LikelihoodVars(g, g.Constant(z), &mu, &log_var);
  GaussianCode out;
  out.mu = g.value(mu);
  out.log_var = model.arch().decoder_variance == DecoderVariance::kLearned
                    ? g.value(log_var)
                    : Matrix::Zero(out.mu.rows(), out.mu.cols());
  return out;
}

LossBreakdown VaeLoss(const Model& model, const Matrix& x, double beta, nn::Rng& rng) {
  if (model.kind() != ModelKind::kVae) throw InvalidArgument("vae_loss on a non-VAE model");
  const Matrix noise = DrawStandardNormal(x.rows(), model.enc(), rng);
  Graph g(Graph::Mode::kInference);
  Batch batch;
  batch.frames = x;
  const LossVars vars = BuildLoss(g, model, batch, beta, &noise);
  return ReadLoss(g, vars, beta);
}

LossVars BuildLoss(Graph& g, const Model& model, const Batch& batch, double beta,
                   const Matrix* noise) {
  const int dim = model.input_dim();
  LossVars out;
  switch (model.kind()) {
    case ModelKind::kPca:
      throw InvalidArgument("pca has no differentiable loss");
    case ModelKind::kAe:
    case ModelKind::kDae: {
      CheckCols(batch.frames, dim, "loss");
      const Graph::Var x = g.Constant(batch.frames);
      const Graph::Var xhat = model.DecodeVar(g, model.EncodeVar(g, x));
      out.recon = g.Mean(g.Square(g.Sub(xhat, x)));
      out.kl = g.Constant(Matrix::Zero(1, 1));
      out.total = out.recon;
      return out;
    }
    case ModelKind::kVae: {
      CheckCols(batch.frames, dim, "loss");
      const Eigen::Index n = batch.frames.rows();
      if (n == 0) throw InvalidArgument("empty batch");
      if (!noise || noise->rows() != n || noise->cols() != model.enc()) {
        throw InvalidArgument("vae loss needs a batch x enc noise matrix");
      }
      const Graph::Var x = g.Constant(batch.frames);
      Graph::Var mu, log_var;
      model.PosteriorVars(g, x, &mu, &log_var);
      const Graph::Var sd = g.Exp(g.Scale(log_var, 0.5));
      const Graph::Var z = g.Add(mu, g.Mul(sd, g.Constant(*noise)));
      Graph::Var x_mu, x_log_var;
      model.LikelihoodVars(g, z, &x_mu, &x_log_var);
      const Graph::Var sq = g.Square(g.Sub(x, x_mu));
      Graph::Var per_bin = sq;
      if (model.arch().decoder_variance == DecoderVariance::kLearned) {
        per_bin = g.Add(x_log_var, g.Mul(sq, g.Exp(g.Scale(x_log_var, -1.0))));
      }
      const double log_two_pi = std::log(2.0 * std::numbers::pi);
      out.recon = g.AddScalar(g.Scale(g.Sum(per_bin), 0.5 / static_cast<double>(n)),
                              0.5 * dim * log_two_pi);
      const Graph::Var kl_terms =
          g.Sub(g.Add(g.Square(mu), g.Exp(log_var)), g.AddScalar(log_var, 1.0));
      out.kl = g.Scale(g.Sum(kl_terms), 0.5 / static_cast<double>(n));
      out.total = g.Add(out.recon, g.Scale(out.kl, beta));
      return out;
    }
    case ModelKind::kLstmAe: {
      if (batch.steps.empty()) throw InvalidArgument("lstm_ae loss needs a sequence batch");
      const Eigen::Index b = batch.steps.front().rows();
      const auto steps = static_cast<Eigen::Index>(batch.steps.size());
      const bool masked = batch.mask.size() > 0;
      if (masked && (batch.mask.rows() != b || batch.mask.cols() != steps)) {
        throw InvalidArgument("sequence mask must be batch x steps");
      }
      std::vector<Graph::Var> xs;
      xs.reserve(batch.steps.size());
      for (const Matrix& s : batch.steps) {
        CheckCols(s, dim, "loss");
        xs.push_back(g.Constant(s));
      }
      const std::vector<Graph::Var> hs = model.SequenceVars(g, xs, nullptr);
      const double valid = masked ? batch.mask.sum() : static_cast<double>(b * steps);
      if (valid <= 0.0) throw InvalidArgument("sequence batch has no valid frames");
      Graph::Var acc{};
      for (Eigen::Index t = 0; t < steps; ++t) {
        Graph::Var sq = g.Square(g.Sub(hs[static_cast<std::size_t>(t)],
                                       xs[static_cast<std::size_t>(t)]));
        if (masked) {
          Matrix weights = batch.mask.col(t).replicate(1, dim);
          sq = g.Mul(sq, g.Constant(std::move(weights)));
        }
        const Graph::Var s = g.Sum(sq);
        acc = t == 0 ? s : g.Add(acc, s);
      }
      out.recon = g.Scale(acc, 1.0 / (valid * dim));
      out.kl = g.Constant(Matrix::Zero(1, 1));
      out.total = out.recon;
      return out;
    }
  }
  throw InvalidArgument("unknown model kind");
}

LossBreakdown ReadLoss(const Graph& g, const LossVars& vars, double beta) {
  LossBreakdown out;
  out.recon = g.scalar(vars.recon);
  out.kl = g.scalar(vars.kl);
  out.beta = beta;
  out.total = g.scalar(vars.total);
  return out;
}

}  // namespace latentsynth::models
