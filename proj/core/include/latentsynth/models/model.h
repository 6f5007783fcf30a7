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

#ifndef LATENTSYNTH_MODELS_MODEL_H_
#define LATENTSYNTH_MODELS_MODEL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/models/arch.h"
#include "latentsynth/nn/graph.h"
#include "latentsynth/nn/layers.h"
#include "latentsynth/pca/pca.h"

namespace latentsynth::models {

inline constexpr double kLogVarMin = -10.0;
inline constexpr double kLogVarMax = 10.0;

// Diagonal Gaussian, one row per datum.
struct GaussianCode {
  Matrix mu;
  Matrix log_var;
};

// Per-batch means. For deterministic autoencoders kl == 0 and
// total == recon; for the VAE total == recon + beta * kl.
struct LossBreakdown {
  double recon = 0.0;
  double kl = 0.0;
  double beta = 0.0;
  double total = 0.0;
};

// One mini-batch. Frame models use `frames`; sequence models use `steps`
// (steps[t] is batch x dim) with `mask` (batch x T, 1 for real frames,
// 0 for padding).
struct Batch {
  Matrix frames;
  std::vector<Matrix> steps;
  Matrix mask;

  bool is_sequence() const { return !steps.empty(); }
};

// Graph handles for one recorded loss.
struct LossVars {
  nn::Graph::Var recon;
  nn::Graph::Var kl;
  nn::Graph::Var total;
};

// Any of the five dimensionality reducers behind one interface. Parameters
// are held by value, so copying a Model snapshots it.
class Model {
 public:
  // Glorot-initialized parameters drawn from a generator seeded with `seed`
  // in a fixed layer order. PCA models start unfitted.
  static Model Create(const ArchSpec& arch, std::uint64_t seed);
  // Every weight and bias zero.
  static Model CreateZero(const ArchSpec& arch);

  const ArchSpec& arch() const { return arch_; }
  ModelKind kind() const { return arch_.kind; }
  int enc() const { return arch_.enc(); }
  int input_dim() const { return arch_.input_dim(); }
  bool is_sequence_model() const { return arch_.kind == ModelKind::kLstmAe; }

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;
  nn::Parameter* FindParameter(const std::string& name);
  std::size_t NumParameters() const;

  const pca::PcaModel& pca() const { return pca_; }
  void set_pca(pca::PcaModel model);

  // Direct layer access for stacking pretrained layers.
  std::vector<nn::DenseParams>& encoder_layers() { return encoder_; }
  std::vector<nn::DenseParams>& decoder_layers() { return decoder_; }

  // One sound, rows = frames in time order. Frame models handle rows
  // independently; the LSTM-AE treats the rows as one sequence. The VAE
  // returns posterior means and decodes to the likelihood mean.
  Matrix Encode(const Matrix& frames) const;
  Matrix Decode(const Matrix& codes) const;
  Matrix Reconstruct(const Matrix& frames) const;

  // Graph pieces for frame models (all kinds except pca and lstm_ae).
  nn::Graph::Var EncodeVar(nn::Graph& g, nn::Graph::Var x) const;
  nn::Graph::Var DecodeVar(nn::Graph& g, nn::Graph::Var z) const;
  // VAE: posterior parameters (log-variance clamped to [-10, 10]).
  void PosteriorVars(nn::Graph& g, nn::Graph::Var x, nn::Graph::Var* mu,
                     nn::Graph::Var* log_var) const;
  // VAE: likelihood mean and (clamped) log-variance; log_var is left
  // untouched in unit-variance mode.
  void LikelihoodVars(nn::Graph& g, nn::Graph::Var z, nn::Graph::Var* mu,
                      nn::Graph::Var* log_var) const;
  std::vector<nn::Graph::Var> SequenceVars(nn::Graph& g,
                                           const std::vector<nn::Graph::Var>& xs,
                                           std::vector<nn::Graph::Var>* codes) const;

 private:
  explicit Model(const ArchSpec& arch) : arch_(arch) {}
  void Build(nn::Rng* rng);

  ArchSpec arch_;
  std::vector<nn::DenseParams> encoder_;
  std::vector<nn::DenseParams> decoder_;
  nn::DenseParams mu_head_;
  nn::DenseParams log_var_head_;
  nn::DenseParams out_log_var_head_;
  nn::LstmParams encoder_lstm_;
  nn::LstmParams decoder_lstm_;
  pca::PcaModel pca_;
};

// Mean of squared entry differences.
double MseLoss(const Matrix& x, const Matrix& xhat);

// KL(N(mu, exp(log_var)) || N(0, I)), summed over dimensions and averaged
// over rows: -0.5 * sum(1 + log_var - mu^2 - exp(log_var)).
double KlToStandardNormal(const GaussianCode& g);

GaussianCode VaeEncode(const Model& model, const Matrix& x);
// mu + exp(0.5 * log_var) * eps with eps ~ N(0, 1) drawn row-major from rng.
Matrix VaeReparameterize(const GaussianCode& g, nn::Rng& rng);
GaussianCode VaeDecode(const Model& model, const Matrix& z);
// Standard-normal draws in the layout VaeReparameterize uses.
Matrix DrawStandardNormal(Eigen::Index rows, Eigen::Index cols, nn::Rng& rng);

// Single-sample estimate of beta * KL + negative Gaussian log-likelihood.
LossBreakdown VaeLoss(const Model& model, const Matrix& x, double beta, nn::Rng& rng);

// Records the training loss of `batch` on g. For the VAE `noise` supplies
// the reparameterization draws (batch x enc) so gradients can be checked
// with frozen noise.
LossVars BuildLoss(nn::Graph& g, const Model& model, const Batch& batch, double beta,
                   const Matrix* noise = nullptr);

LossBreakdown ReadLoss(const nn::Graph& g, const LossVars& vars, double beta);

}  // namespace latentsynth::models

#endif  // LATENTSYNTH_MODELS_MODEL_H_
