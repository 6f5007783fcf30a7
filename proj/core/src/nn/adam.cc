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

#include "latentsynth/nn/adam.h"

#include <cmath>

namespace latentsynth::nn {

void Adam::Step(std::span<Parameter* const> params) {
  for (const Parameter* p : params) {
    if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols()) {
      throw InvalidArgument("adam: gradient shape mismatch for " + p->name);
    }
    if (!p->grad.allFinite()) throw Error("non-finite gradient in " + p->name);
  }
  ++step_;
  const double correction1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
  for (Parameter* p : params) {
    Moments& mo = moments_[p->name];
    if (mo.m.size() == 0) {
      mo.m = Matrix::Zero(p->value.rows(), p->value.cols());
      mo.v = Matrix::Zero(p->value.rows(), p->value.cols());
    }
    mo.m = cfg_.beta1 * mo.m + (1.0 - cfg_.beta1) * p->grad;
    mo.v = cfg_.beta2 * mo.v + (1.0 - cfg_.beta2) * p->grad.cwiseAbs2();
    p->value.array() -= cfg_.learning_rate * (mo.m.array() / correction1) /
                        ((mo.v.array() / correction2).sqrt() + cfg_.epsilon);
  }
}

}  // namespace latentsynth::nn
