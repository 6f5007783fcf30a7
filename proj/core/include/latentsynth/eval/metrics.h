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

#ifndef LATENTSYNTH_EVAL_METRICS_H_
#define LATENTSYNTH_EVAL_METRICS_H_

#include <string>
#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/dataset/corpus.h"
#include "latentsynth/dsp/spectral_norm.h"
#include "latentsynth/models/model.h"

namespace latentsynth::eval {

// sqrt(mean((a - b)^2)) over every entry. Throws on shape mismatch or
// empty input.
double RmseDb(const Matrix& a_db, const Matrix& b_db);

// Mean over frames of the per-frame RMS dB difference. A log-spectral
// distance proxy for perceptual comparisons; it is not PEMO-Q and is not
// comparable to PEMO-Q scores.
double LogSpectralDistance(const Matrix& a_db, const Matrix& b_db);

struct SoundScore {
  std::string id;
  double rmse_db = 0.0;
  double lsd_db = 0.0;
};

// Reconstructs the voiced frames of one sound and compares original and
// reconstruction in absolute dB, both clamped at the preprocessing
// threshold (the range the models are trained on).
SoundScore ScoreSound(const models::Model& model, const dataset::SoundFrames& sound,
                      const dsp::PreprocConfig& preproc);

// Mean and 95% half-width (Student t, n - 1 degrees of freedom) of a
// sample. The half-width is 0 for fewer than two values.
struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
  int n = 0;
};
MeanCi MeanWithCi(const std::vector<double>& values);

// Same statistics over the paired differences a[i] - b[i].
MeanCi PairedDifference(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace latentsynth::eval

#endif  // LATENTSYNTH_EVAL_METRICS_H_
