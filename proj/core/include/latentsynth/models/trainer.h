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

#ifndef LATENTSYNTH_MODELS_TRAINER_H_
#define LATENTSYNTH_MODELS_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/models/model.h"

namespace latentsynth::models {

// Training data: one matrix per sound (rows = frames in time order).
using SoundSet = std::vector<Matrix>;

struct TrainConfig {
  int max_epochs = 600;
  int patience = 30;
  int batch_size = 512;
  double learning_rate = 1e-3;
  double beta = 1.0;  // VAE only
  bool layerwise = false;  // DAE only
  std::uint64_t seed = 0;
  double validation_fraction = 0.2;

  void Validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  LossBreakdown train;
  LossBreakdown validation;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_validation = 0.0;
  bool stopped_early = false;
  double seconds = 0.0;

  int epochs_run() const { return static_cast<int>(epochs.size()); }
};

// Mini-batch Adam on `train`, validation after every epoch. The parameters
// with the lowest validation loss are restored on return. Training stops
// once `patience` epochs pass without improvement, or at max_epochs.
//
// Frame models shuffle frames across all sounds; the LSTM-AE batches whole
// sounds (zero-padded, masked). PCA models are fitted in closed form and
// report a single epoch. Deterministic for a given cfg.seed.
TrainHistory Train(Model& model, const SoundSet& train, const SoundSet& validation,
                   const TrainConfig& cfg);

// Holds out cfg.validation_fraction of the sounds (at least one) for
// validation, chosen by a seeded shuffle, then calls Train.
TrainHistory TrainWithHoldout(Model& model, const SoundSet& sounds, const TrainConfig& cfg);

// Splits sounds into (train, validation) the way TrainWithHoldout does.
void SplitHoldout(const SoundSet& sounds, double fraction, std::uint64_t seed,
                  SoundSet* train, SoundSet* validation);

// Deep autoencoder trained as a stack of shallow autoencoders: each stage
// reconstructs the codes of the previous stage's encoder, the trained
// layers are stacked into `arch`, then the whole network is fine-tuned end
// to end. A one-hidden-layer arch skips stacking and equals plain Train.
// `stages` receives one history per pretraining stage plus the fine-tuning
// history last.
Model LayerwisePretrain(const ArchSpec& arch, const SoundSet& train,
                        const SoundSet& validation, const TrainConfig& cfg,
                        std::vector<TrainHistory>* stages = nullptr);

// Loss of the whole set, evaluated in batches of cfg.batch_size and
// weighted by batch size. VAE noise comes from a generator seeded with
// `noise_seed`, so repeated calls agree exactly.
LossBreakdown EvaluateLoss(const Model& model, const SoundSet& sounds, const TrainConfig& cfg,
                           std::uint64_t noise_seed);

// Seed used for validation noise by Train.
std::uint64_t ValidationNoiseSeed(const TrainConfig& cfg);

// epoch,train_recon,train_kl,train_total,val_recon,val_kl,val_total,beta
std::string HistoryCsv(const TrainHistory& history);

}  // namespace latentsynth::models

#endif  // LATENTSYNTH_MODELS_TRAINER_H_
