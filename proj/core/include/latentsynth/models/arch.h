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

#ifndef LATENTSYNTH_MODELS_ARCH_H_
#define LATENTSYNTH_MODELS_ARCH_H_

#include <string>
#include <vector>

#include "latentsynth/nn/graph.h"

namespace latentsynth::models {

enum class ModelKind { kPca, kAe, kDae, kLstmAe, kVae };

const char* KindName(ModelKind kind);
// Accepts pca, ae, dae, lstm_ae (or lstm-ae), vae.
ModelKind ParseKind(const std::string& name);

// How the VAE decoder's variance enters the likelihood.
enum class DecoderVariance {
  // A separate linear head predicts a per-bin log-variance.
  kLearned,
  // sigma^2 = 1; the reconstruction term becomes 0.5 * ||x - mu||^2 + const.
  kUnit,
};

const char* DecoderVarianceName(DecoderVariance v);
DecoderVariance ParseDecoderVariance(const std::string& name);

// Layer widths from input to output, e.g. {513, 128, 8, 128, 513}. The list
// is palindromic and its middle entry is the latent dimension.
//
//   pca, ae, lstm_ae : exactly [D, enc, D]
//   dae              : at least one hidden layer on each side
//   vae              : [D, ..., enc, ..., D], hidden layers optional
struct ArchSpec {
  ModelKind kind = ModelKind::kDae;
  std::vector<int> layer_sizes = {513, 128, 8, 128, 513};
  nn::Activation hidden_activation = nn::Activation::kTanh;
  nn::Activation output_activation = nn::Activation::kLinear;
  DecoderVariance decoder_variance = DecoderVariance::kLearned;

  int input_dim() const { return layer_sizes.front(); }
  int enc() const { return layer_sizes[layer_sizes.size() / 2]; }
  // Throws InvalidArgument describing the first violated constraint.
  void Validate() const;
  // "513,128,8,128,513"
  std::string LayersString() const;
  // Short human-readable label: "dae[513,128,8,128,513](tanh,linear)".
  std::string Label() const;

  bool operator==(const ArchSpec&) const = default;
};

std::vector<int> ParseLayers(const std::string& text);

}  // namespace latentsynth::models

#endif  // LATENTSYNTH_MODELS_ARCH_H_
