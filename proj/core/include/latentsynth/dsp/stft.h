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

#ifndef LATENTSYNTH_DSP_STFT_H_
#define LATENTSYNTH_DSP_STFT_H_

#include <span>
#include <vector>

#include "latentsynth/common.h"

namespace latentsynth::dsp {

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  // Throws InvalidArgument on a non-positive rate or non-finite samples.
  void Validate() const;
};

enum class WindowKind { kHamming, kHann, kRectangular };

struct StftConfig {
  int fft_size = 1024;
  int hop = 512;
  WindowKind window = WindowKind::kHamming;

  int num_bins() const { return fft_size / 2 + 1; }
  void Validate() const;
};

// Periodic window of length cfg.fft_size.
std::vector<double> MakeWindow(const StftConfig& cfg);

// Polar form of the positive-frequency half of the windowed DFT, one row per
// frame. magnitudes and phases always have the same shape.
struct SpectralFrames {
  Matrix magnitudes;
  Matrix phases;
  StftConfig config;

  int num_frames() const { return static_cast<int>(magnitudes.rows()); }
  // Throws InvalidArgument if shapes disagree or a magnitude is negative.
  void Validate() const;
};

// Number of samples produced by overlap-add over num_frames frames.
int SynthesisLength(int num_frames, const StftConfig& cfg);

// Frames are taken at offsets 0, hop, 2*hop, ... with no padding, so a
// signal of n samples yields floor((n - fft_size) / hop) + 1 frames.
SpectralFrames Stft(std::span<const double> samples, const StftConfig& cfg = {});
SpectralFrames Stft(const Waveform& w, const StftConfig& cfg = {});

enum class Synthesis {
  // Window applied at analysis only; overlap-added frames are divided by the
  // summed window envelope. Exact inverse of Stft wherever the envelope is
  // non-zero.
  kEnvelope,
  // Least-squares inverse: synthesis window applied again and the sum divided
  // by the summed squared window. The projection Griffin-Lim relies on.
  kLeastSquares,
};

Waveform Istft(const SpectralFrames& frames, Synthesis mode = Synthesis::kEnvelope,
               int sample_rate = kSampleRate);

// Same as Istft on (magnitudes, phases) given separately.
Waveform Istft(const Matrix& magnitudes, const Matrix& phases, const StftConfig& cfg,
               Synthesis mode = Synthesis::kEnvelope, int sample_rate = kSampleRate);

}  // namespace latentsynth::dsp

#endif  // LATENTSYNTH_DSP_STFT_H_
