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

#include "latentsynth/models/arch.h"

#include <sstream>

#include "latentsynth/common.h"

namespace latentsynth::models {

const char* KindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPca:
      return "pca";
    case ModelKind::kAe:
      return "ae";
    case ModelKind::kDae:
      return "dae";
    case ModelKind::kLstmAe:
      return "lstm_ae";
    case ModelKind::kVae:
      return "vae";
  }
  return "?";
}

ModelKind ParseKind(const std::string& name) {
  if (name == "pca") return ModelKind::kPca;
  if (name == "ae") return ModelKind::kAe;
  if (name == "dae") return ModelKind::kDae;
  if (name == "lstm_ae" || name == "lstm-ae") return ModelKind::kLstmAe;
  if (name == "vae") return ModelKind::kVae;
  throw InvalidArgument("unknown model kind '" + name + "'");
}

const char* DecoderVarianceName(DecoderVariance v) {
  return v == DecoderVariance::kLearned ? "learned" : "unit";
}

DecoderVariance ParseDecoderVariance(const std::string& name) {
  if (name == "learned") return DecoderVariance::kLearned;
  if (name == "unit") return DecoderVariance::kUnit;
  throw InvalidArgument("unknown decoder variance mode '" + name + "'");
}

void ArchSpec::Validate() const {
  const std::size_t n = layer_sizes.size();
  if (n < 3 || n % 2 == 0) {
    throw InvalidArgument("architecture needs an odd number (>= 3) of layer sizes");
  }
  for (int s : layer_sizes) {
    if (s < 1) throw InvalidArgument("layer sizes must be positive");
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (layer_sizes[i] != layer_sizes[n - 1 - i]) {
      throw InvalidArgument("architecture " + LayersString() + " is not palindromic");
    }
  }
  switch (kind) {
    case ModelKind::kPca:
    case ModelKind::kAe:
    case ModelKind::kLstmAe:
      if (n != 3) {
        throw InvalidArgument(std::string(KindName(kind)) + " expects [D, enc, D], got " +
                              LayersString());
      }
      break;
    case ModelKind::kDae:
      if (n < 5) throw InvalidArgument("dae needs at least one hidden layer per side");
      break;
    case ModelKind::kVae:
      break;
  }
  if (enc() > input_dim()) throw InvalidArgument("latent dimension exceeds input dimension");
}

std::string ArchSpec::LayersString() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (i) out << ',';
    out << layer_sizes[i];
  }
  return out.str();
}

std::string ArchSpec::Label() const {
  std::string label = std::string(KindName(kind)) + "[" + LayersString() + "]";
  if (kind != ModelKind::kPca && kind != ModelKind::kLstmAe) {
    label += std::string("(") + nn::ActivationName(hidden_activation) + "," +
             nn::ActivationName(output_activation) + ")";
  }
  return label;
}

std::vector<int> ParseLayers(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw InvalidArgument("bad layer size '" + item + "' in '" + text + "'");
    }
  }
  if (sizes.empty()) throw InvalidArgument("empty layer list");
  return sizes;
}

}  // namespace latentsynth::models
