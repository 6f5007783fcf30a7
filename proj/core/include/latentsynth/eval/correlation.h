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

#ifndef LATENTSYNTH_EVAL_CORRELATION_H_
#define LATENTSYNTH_EVAL_CORRELATION_H_

#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/models/model.h"

namespace latentsynth::eval {

// |Pearson| between the columns of `codes` (rows = frames). The diagonal is
// 1. A column with zero variance has its off-diagonal entries set to 0 and
// its flag set in *dead.
Matrix AbsolutePearson(const Matrix& codes, std::vector<bool>* dead = nullptr);

struct CorrelationMatrix {
  Matrix values;  // enc x enc, symmetric, unit diagonal, entries in [0, 1]
  int num_sounds = 0;
  // Per dimension: number of sounds in which it was constant.
  std::vector<int> dead_counts;

  // Mean of the off-diagonal entries.
  double MeanOffDiagonal() const;
};

// Per-sound absolute correlation of the latent codes, averaged over sounds.
// Sounds with fewer than two frames are skipped. Throws if enc < 2 or no
// sound qualifies.
CorrelationMatrix LatentCorrelation(const models::Model& model,
                                    const std::vector<Matrix>& sounds);

}  // namespace latentsynth::eval

#endif  // LATENTSYNTH_EVAL_CORRELATION_H_
