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

#ifndef LATENTSYNTH_DSP_SPECTRAL_NORM_H_
#define LATENTSYNTH_DSP_SPECTRAL_NORM_H_

#include <limits>
#include <span>
#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/dsp/stft.h"

namespace latentsynth::dsp {

// Added to linear magnitudes before taking the log.
inline constexpr double kLogFloorGuard = 1e-12;
inline constexpr double kDefaultSilenceFloorDb = -60.0;

struct PreprocConfig {
  double threshold_db = -100.0;
  double peak_target_db = 0.0;

  void Validate() const;
};

// One log-magnitude frame mapped to [-1, 1]. The frame peak lands on +1 and
// anything at or below threshold_db relative to the peak lands on -1.
struct NormalizedFrame {
  Vector values;
  // Peak level of the frame in absolute dB; restores loudness on the way back.
  double energy_db = 0.0;
};

// 20*log10(mag + guard), shifted so the frame maximum sits at
// peak_target_db, clamped at threshold_db, then mapped affinely onto [-1, 1].
// Throws InvalidArgument("silent frame") when every magnitude is zero.
NormalizedFrame Preprocess(std::span<const double> magnitudes, const PreprocConfig& cfg);
NormalizedFrame Preprocess(const Vector& magnitudes, const PreprocConfig& cfg);

// Inverse of Preprocess for every bin above threshold. Values outside
// [-1, 1] are clamped first.
Vector Postprocess(const NormalizedFrame& frame, const PreprocConfig& cfg);

// Normalized values -> absolute dB (clamped to [-1, 1] first). Applied
// row-wise with one energy per row.
Matrix NormalizedToDb(const Matrix& values, std::span<const double> energy_db,
                      const PreprocConfig& cfg);
// Absolute dB -> linear magnitude, undoing the log floor guard.
Matrix DbToMagnitude(const Matrix& db);

// Frames whose peak magnitude lies within floor_db of the file-level peak,
// in order. floor_db == -inf keeps every frame; an all-zero input keeps none
// otherwise.
std::vector<int> VoicedFrameIndices(const SpectralFrames& frames,
                                    double floor_db = kDefaultSilenceFloorDb);

SpectralFrames RemoveSilence(const SpectralFrames& frames,
                             double floor_db = kDefaultSilenceFloorDb);

}  // namespace latentsynth::dsp

#endif  // LATENTSYNTH_DSP_SPECTRAL_NORM_H_
