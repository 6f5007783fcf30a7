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

#ifndef LATENTSYNTH_INTERP_INTERP_H_
#define LATENTSYNTH_INTERP_INTERP_H_

#include <array>
#include <span>
#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/dataset/corpus.h"
#include "latentsynth/dsp/griffin_lim.h"
#include "latentsynth/dsp/spectral_norm.h"
#include "latentsynth/models/model.h"

namespace latentsynth::interp {

inline constexpr std::array<double, 5> kAlphaGrid = {0.0, 0.25, 0.5, 0.75, 1.0};

// alpha * z1 + (1 - alpha) * z2 row by row. The result has `rows` rows
// (default: the rows of z1 when alpha >= 0.5, else of z2); a shorter input
// holds its last row and a longer one is truncated. alpha == 1 returns z1
// and alpha == 0 returns z2 exactly. Throws on column mismatch, alpha
// outside [0, 1] or an empty input.
Matrix InterpolateCodes(const Matrix& z1, const Matrix& z2, double alpha, int rows = -1);

// Same policy for per-frame scalars.
std::vector<double> InterpolateSeries(std::span<const double> a, std::span<const double> b,
                                      double alpha, int length = -1);

struct SynthesisConfig {
  int griffin_lim_iters = dsp::kDefaultGriffinLimIterations;
  dsp::PreprocConfig preproc;
};

struct Rendering {
  dsp::Waveform waveform;
  Matrix magnitudes;       // every STFT frame of the carrier, linear
  Matrix codes;            // the decoded codes, one row per voiced frame
  std::vector<double> energy_db;
  // Frames of the non-dominant sound that were held or dropped to match
  // lengths (0 when both sounds have the same number of voiced frames).
  int length_mismatch = 0;

  Matrix SpectrogramDb() const;
};

// Decodes `codes` (rows aligned with carrier.frame_index), denormalizes with
// energy_db, places the frames at the carrier's STFT positions (silent
// frames stay zero) and runs Griffin-Lim from the carrier's phases. The
// waveform is zero-padded to carrier.num_samples.
Rendering DecodeOnto(const models::Model& model, const Matrix& codes,
                     std::span<const double> energy_db, const dataset::SoundFrames& carrier,
                     const SynthesisConfig& cfg);

// Plain analysis-resynthesis of one sound through the model. VAE codes are
// posterior means.
Rendering Resynthesize(const models::Model& model, const dataset::SoundFrames& sound,
                       const SynthesisConfig& cfg);

// Encodes both sounds, interpolates codes and energies with alpha and
// resynthesizes on the dominant sound (a when alpha >= 0.5, else b), whose
// length, frame positions and phases are used. alpha == 1 and alpha == 0
// reproduce Resynthesize(a) and Resynthesize(b) bit for bit.
Rendering Hybridize(const models::Model& model, const dataset::SoundFrames& a,
                    const dataset::SoundFrames& b, double alpha, const SynthesisConfig& cfg);

}  // namespace latentsynth::interp

#endif  // LATENTSYNTH_INTERP_INTERP_H_
