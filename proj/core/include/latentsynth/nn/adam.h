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

#ifndef LATENTSYNTH_NN_ADAM_H_
#define LATENTSYNTH_NN_ADAM_H_

#include <map>
#include <span>
#include <string>

#include "latentsynth/common.h"
#include "latentsynth/nn/graph.h"

namespace latentsynth::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moment estimates are keyed by parameter name,
// so the optimizer survives copies of the model that owns the parameters.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  // One update from the current .grad of every parameter. Throws
  // Error("non-finite gradient") before touching anything if a gradient
  // contains NaN/Inf.
  void Step(std::span<Parameter* const> params);

  long step_count() const { return step_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  struct Moments {
    Matrix m;
    Matrix v;
  };

  AdamConfig cfg_;
  long step_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace latentsynth::nn

#endif  // LATENTSYNTH_NN_ADAM_H_
