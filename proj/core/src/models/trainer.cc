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

#include "latentsynth/models/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "latentsynth/nn/adam.h"

namespace latentsynth::models {
namespace {

using nn::Graph;

Matrix Stack(const SoundSet& sounds, int dim) {
  Eigen::Index rows = 0;
  for (const Matrix& s : sounds) {
    if (s.cols() != dim) {
      throw InvalidArgument("sound has " + std::to_string(s.cols()) + " columns, model expects " +
                            std::to_string(dim));
    }
    rows += s.rows();
  }
  Matrix out(rows, dim);
  Eigen::Index r = 0;
  for (const Matrix& s : sounds) {
    out.middleRows(r, s.rows()) = s;
    r += s.rows();
  }
  return out;
}

Batch SequenceBatch(const SoundSet& sounds, std::span<const int> which, int dim) {
  Eigen::Index longest = 0;
  for (int i : which) longest = std::max(longest, sounds[static_cast<std::size_t>(i)].rows());
  const auto b = static_cast<Eigen::Index>(which.size());
  Batch batch;
  batch.steps.assign(static_cast<std::size_t>(longest), Matrix::Zero(b, dim));
  batch.mask = Matrix::Zero(b, longest);
  for (Eigen::Index k = 0; k < b; ++k) {
    const Matrix& s = sounds[static_cast<std::size_t>(which[static_cast<std::size_t>(k)])];
    for (Eigen::Index t = 0; t < s.rows(); ++t) {
      batch.steps[static_cast<std::size_t>(t)].row(k) = s.row(t);
      batch.mask(k, t) = 1.0;
    }
  }
  return batch;
}

double BetaFor(const Model& model, const TrainConfig& cfg) {
  return model.kind() == ModelKind::kVae ? cfg.beta : 0.0;
}

void AddWeighted(LossBreakdown& acc, const LossBreakdown& part, double weight) {
  acc.recon += weight * part.recon;
  acc.kl += weight * part.kl;
  acc.total += weight * part.total;
}

LossBreakdown Scaled(LossBreakdown l, double s, double beta) {
  l.recon *= s;
  l.kl *= s;
  l.total *= s;
  l.beta = beta;
  return l;
}

TrainHistory FitPca(Model& model, const SoundSet& train, const SoundSet& validation,
                    const TrainConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Matrix x = Stack(train, model.input_dim());
  if (x.rows() == 0) throw InvalidArgument("empty training data");
  model.set_pca(pca::Fit(x, model.enc()));
  TrainHistory h;
  EpochRecord rec;
  rec.epoch = 1;
  rec.train.recon = rec.train.total = MseLoss(x, model.Reconstruct(x));
  rec.validation = EvaluateLoss(model, validation, cfg, 0);
  h.epochs.push_back(rec);
  h.best_epoch = 1;
  h.best_validation = rec.validation.total;
  h.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return h;
}

// One optimizer step on `batch`; returns the loss recorded before the step.
LossBreakdown Step(Model& model, const Batch& batch, const TrainConfig& cfg, nn::Adam& adam,
                   nn::Rng& noise_rng) {
  const double beta = BetaFor(model, cfg);
  Graph g;
  LossVars vars;
  if (model.kind() == ModelKind::kVae) {
    const Matrix noise = DrawStandardNormal(batch.frames.rows(), model.enc(), noise_rng);
    vars = BuildLoss(g, model, batch, beta, &noise);
  } else {
    vars = BuildLoss(g, model, batch, beta);
  }
  g.Backward(vars.total);
  const std::vector<nn::Parameter*> params = model.parameters();
  for (nn::Parameter* p : params) p->ZeroGrad();
  g.AccumulateGradients(params);
  adam.Step(params);
  return ReadLoss(g, vars, beta);
}

}  // namespace

void TrainConfig::Validate() const {
  if (max_epochs < 1) throw InvalidArgument("max_epochs must be positive");
  if (patience < 1) throw InvalidArgument("patience must be positive");
  if (patience >= max_epochs) throw InvalidArgument("patience must be below max_epochs");
  if (batch_size < 1) throw InvalidArgument("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw InvalidArgument("validation_fraction must lie in (0, 1)");
  }
}

std::uint64_t ValidationNoiseSeed(const TrainConfig& cfg) {
  return cfg.seed ^ 0x6a09e667f3bcc909ULL;
}

LossBreakdown EvaluateLoss(const Model& model, const SoundSet& sounds, const TrainConfig& cfg,
                           std::uint64_t noise_seed) {
  const double beta = BetaFor(model, cfg);
  LossBreakdown acc;
  acc.beta = beta;
  if (sounds.empty()) throw InvalidArgument("empty evaluation set");

  if (model.kind() == ModelKind::kPca) {
    const Matrix x = Stack(sounds, model.input_dim());
    acc.recon = acc.total = MseLoss(x, model.Reconstruct(x));
    return acc;
  }

  const int dim = model.input_dim();
  if (model.is_sequence_model()) {
    std::vector<int> order(sounds.size());
    std::iota(order.begin(), order.end(), 0);
    double frames = 0.0;
    for (std::size_t i = 0; i < order.size(); i += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), i + static_cast<std::size_t>(cfg.batch_size));
      const Batch batch =
          SequenceBatch(sounds, std::span<const int>(order.data() + i, end - i), dim);
      Graph g(Graph::Mode::kInference);
      const LossBreakdown part = ReadLoss(g, BuildLoss(g, model, batch, beta), beta);
      const double n = batch.mask.sum();
      AddWeighted(acc, part, n);
      frames += n;
    }
    return Scaled(acc, 1.0 / frames, beta);
  }

  const Matrix x = Stack(sounds, dim);
  if (x.rows() == 0) throw InvalidArgument("evaluation set has no frames");
  nn::Rng noise_rng(noise_seed);
  for (Eigen::Index r = 0; r < x.rows(); r += cfg.batch_size) {
    const Eigen::Index n = std::min<Eigen::Index>(cfg.batch_size, x.rows() - r);
    Batch batch;
    batch.frames = x.middleRows(r, n);
    Graph g(Graph::Mode::kInference);
    LossVars vars;
    if (model.kind() == ModelKind::kVae) {
      const Matrix noise = DrawStandardNormal(n, model.enc(), noise_rng);
      vars = BuildLoss(g, model, batch, beta, &noise);
    } else {
      vars = BuildLoss(g, model, batch, beta);
    }
    AddWeighted(acc, ReadLoss(g, vars, beta), static_cast<double>(n));
  }
  return Scaled(acc, 1.0 / static_cast<double>(x.rows()), beta);
}

TrainHistory Train(Model& model, const SoundSet& train, const SoundSet& validation,
                   const TrainConfig& cfg) {
  cfg.Validate();
  if (train.empty()) throw InvalidArgument("empty training data");
  if (validation.empty()) throw InvalidArgument("empty validation data");
  if (model.kind() == ModelKind::kPca) return FitPca(model, train, validation, cfg);

  const auto start = std::chrono::steady_clock::now();
  const int dim = model.input_dim();
  const double beta = BetaFor(model, cfg);
  nn::Rng shuffle_rng(cfg.seed);
  nn::Rng noise_rng(cfg.seed ^ 0xbb67ae8584caa73bULL);
  nn::Adam adam(nn::AdamConfig{.learning_rate = cfg.learning_rate});

  Matrix frames;
  std::vector<int> order;
  if (model.is_sequence_model()) {
    order.resize(train.size());
  } else {
    frames = Stack(train, dim);
    if (frames.rows() == 0) throw InvalidArgument("empty training data");
    order.resize(static_cast<std::size_t>(frames.rows()));
  }

  TrainHistory history;
  history.best_validation = std::numeric_limits<double>::infinity();
  Model best = model;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    LossBreakdown epoch_loss;
    double seen = 0.0;
    for (std::size_t i = 0; i < order.size(); i += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), i + static_cast<std::size_t>(cfg.batch_size));
      const std::span<const int> which(order.data() + i, end - i);
      Batch batch;
      double weight = 0.0;
      if (model.is_sequence_model()) {
        batch = SequenceBatch(train, which, dim);
        weight = batch.mask.sum();
      } else {
        batch.frames = frames(std::vector<int>(which.begin(), which.end()), Eigen::all);
        weight = static_cast<double>(which.size());
      }
      AddWeighted(epoch_loss, Step(model, batch, cfg, adam, noise_rng), weight);
      seen += weight;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train = Scaled(epoch_loss, 1.0 / seen, beta);
    rec.validation = EvaluateLoss(model, validation, cfg, ValidationNoiseSeed(cfg));
    history.epochs.push_back(rec);

    if (rec.validation.total < history.best_validation) {
      history.best_validation = rec.validation.total;
      history.best_epoch = epoch;
      best = model;
    } else if (epoch - history.best_epoch >= cfg.patience) {
      history.stopped_early = true;
      break;
    }
  }
  model = std::move(best);
  history.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return history;
}

void SplitHoldout(const SoundSet& sounds, double fraction, std::uint64_t seed, SoundSet* train,
                  SoundSet* validation) {
  if (sounds.size() < 2) {
    throw InvalidArgument("need at least two sounds to hold out a validation set");
  }
  std::vector<std::size_t> order(sounds.size());
  std::iota(order.begin(), order.end(), 0);
  nn::Rng rng(seed ^ 0x3c6ef372fe94f82bULL);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_val = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(sounds.size()))), 1,
      sounds.size() - 1);
  // Keep the original sound order inside each part.
  std::vector<bool> is_val(sounds.size(), false);
  for (std::size_t i = 0; i < n_val; ++i) is_val[order[i]] = true;
  train->clear();
  validation->clear();
  for (std::size_t i = 0; i < sounds.size(); ++i) {
    (is_val[i] ? validation : train)->push_back(sounds[i]);
  }
}

TrainHistory TrainWithHoldout(Model& model, const SoundSet& sounds, const TrainConfig& cfg) {
  cfg.Validate();
  SoundSet train, validation;
  SplitHoldout(sounds, cfg.validation_fraction, cfg.seed, &train, &validation);
  return Train(model, train, validation, cfg);
}

Model LayerwisePretrain(const ArchSpec& arch, const SoundSet& train, const SoundSet& validation,
                        const TrainConfig& cfg, std::vector<TrainHistory>* stages) {
  arch.Validate();
  if (arch.kind != ModelKind::kDae && arch.kind != ModelKind::kAe) {
    throw InvalidArgument("layer-wise pretraining applies to (deep) autoencoders only");
  }
  if (stages) stages->clear();
  const std::vector<int>& s = arch.layer_sizes;
  const int mid = static_cast<int>(s.size()) / 2;

  Model stacked = Model::Create(arch, cfg.seed);
  if (mid == 1) {
    TrainHistory h = Train(stacked, train, validation, cfg);
    if (stages) stages->push_back(std::move(h));
    return stacked;
  }

  SoundSet codes_train = train;
  SoundSet codes_val = validation;
  for (int k = 0; k < mid; ++k) {
    ArchSpec stage_arch;
    stage_arch.kind = ModelKind::kAe;
    stage_arch.layer_sizes = {s[k], s[k + 1], s[k]};
    stage_arch.hidden_activation = arch.hidden_activation;
    stage_arch.output_activation = k == 0 ? arch.output_activation : arch.hidden_activation;
    TrainConfig stage_cfg = cfg;
    stage_cfg.seed = cfg.seed + static_cast<std::uint64_t>(k) + 1;
    Model stage = Model::Create(stage_arch, stage_cfg.seed);
    TrainHistory h = Train(stage, codes_train, codes_val, stage_cfg);
    if (stages) stages->push_back(std::move(h));

    const nn::DenseParams& enc_layer = stage.encoder_layers().front();
    const nn::DenseParams& dec_layer = stage.decoder_layers().front();
    nn::DenseParams& enc_target = stacked.encoder_layers()[static_cast<std::size_t>(k)];
    nn::DenseParams& dec_target = stacked.decoder_layers()[static_cast<std::size_t>(mid - 1 - k)];
    enc_target.weight.value = enc_layer.weight.value;
    enc_target.bias.value = enc_layer.bias.value;
    dec_target.weight.value = dec_layer.weight.value;
    dec_target.bias.value = dec_layer.bias.value;

    if (k + 1 < mid) {
      for (Matrix& m : codes_train) m = nn::DenseForward(enc_layer, m);
      for (Matrix& m : codes_val) m = nn::DenseForward(enc_layer, m);
    }
  }
  TrainHistory fine = Train(stacked, train, validation, cfg);
  if (stages) stages->push_back(std::move(fine));
  return stacked;
}

std::string HistoryCsv(const TrainHistory& history) {
  std::ostringstream out;
  out.precision(12);
  out << "epoch,train_recon,train_kl,train_total,val_recon,val_kl,val_total,beta\n";
  for (const EpochRecord& e : history.epochs) {
    out << e.epoch << ',' << e.train.recon << ',' << e.train.kl << ',' << e.train.total << ','
        << e.validation.recon << ',' << e.validation.kl << ',' << e.validation.total << ','
        << e.validation.beta << '\n';
  }
  return out.str();
}

}  // namespace latentsynth::models
