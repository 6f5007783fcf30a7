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

#ifndef LATENTSYNTH_DSP_GRIFFIN_LIM_H_
#define LATENTSYNTH_DSP_GRIFFIN_LIM_H_

#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/dsp/stft.h"

namespace latentsynth::dsp {

inline constexpr int kDefaultGriffinLimIterations = 100;

struct GriffinLimResult {
  Waveform waveform;
  // Phase estimate after the last iteration (equal to the initial phases when
  // no iteration ran).
  Matrix phases;
  // inconsistency[i] = || |STFT(x_i)| - M || where x_i is the least-squares
  // signal estimate produced in iteration i. The norm is the Frobenius norm
  // of the full (Hermitian-extended) spectrum, so interior bins count twice.
  // Non-increasing in i.
  std::vector<double> inconsistency;
};

// Classic Griffin-Lim phase reconstruction starting from init_phases.
// The returned waveform is Istft (envelope synthesis) of the target
// magnitudes combined with the final phase estimate, so iterations == 0
// reproduces Istft(magnitudes, init_phases) exactly.
GriffinLimResult GriffinLim(const Matrix& magnitudes, const Matrix& init_phases,
                            int iterations, const StftConfig& cfg = {});

// Parseval-weighted distance between two magnitude spectrograms with
// cfg.num_bins() columns.
double SpectralDistance(const Matrix& a, const Matrix& b);

}  // namespace latentsynth::dsp

#endif  // LATENTSYNTH_DSP_GRIFFIN_LIM_H_
