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

#ifndef LATENTSYNTH_MODELS_BUNDLE_H_
#define LATENTSYNTH_MODELS_BUNDLE_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "latentsynth/dsp/spectral_norm.h"
#include "latentsynth/models/model.h"

namespace latentsynth::models {

struct TrainingMetadata {
  std::uint64_t seed = 0;
  int epochs_run = 0;
  double beta = 0.0;
  double final_train_loss = 0.0;
  double final_validation_loss = 0.0;
};

// A trained model plus everything needed to run it on audio.
struct ModelBundle {
  Model model;
  dsp::PreprocConfig preproc;
  TrainingMetadata meta;
};

// Self-describing text document:
//
//   latentsynth-bundle 1
//   kind dae
//   layers 513,128,8,128,513
//   hidden_activation tanh
//   ...
//   tensors 8
//   tensor enc0.W 128 513
//   <row-major values as C99 hex floats>
//   ...
//   end
//
// Hex floats make save/load bit-exact. Loading checks that the tensor names
// and shapes match the architecture exactly.
std::string SerializeBundle(const ModelBundle& bundle);
ModelBundle ParseBundle(const std::string& text);

void SaveBundle(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle LoadBundle(const std::filesystem::path& path);

}  // namespace latentsynth::models

#endif  // LATENTSYNTH_MODELS_BUNDLE_H_
