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

#include "latentsynth/dsp/stft.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

namespace latentsynth::dsp {
namespace {

using Complex = std::complex<double>;

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::FFT<double> MakeRealFft() {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  return fft;
}

}  // namespace

void Waveform::Validate() const {
  if (sample_rate <= 0) {
    throw InvalidArgument("sample rate must be positive, got " +
                          std::to_string(sample_rate));
  }
  for (double s : samples) {
    if (!std::isfinite(s)) throw InvalidArgument("waveform contains non-finite samples");
  }
}

void StftConfig::Validate() const {
  if (!IsPowerOfTwo(fft_size) || fft_size < 4) {
    throw InvalidArgument("fft_size must be a power of two >= 4, got " +
                          std::to_string(fft_size));
  }
  if (hop * 2 != fft_size) {
    throw InvalidArgument("hop must be fft_size / 2 (50% overlap)");
  }
}

std::vector<double> MakeWindow(const StftConfig& cfg) {
  const int n = cfg.fft_size;
  std::vector<double> w(n, 1.0);
  const double step = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    switch (cfg.window) {
      case WindowKind::kHamming:
        w[i] = 0.54 - 0.46 * std::cos(step * i);
        break;
      case WindowKind::kHann:
        w[i] = 0.5 - 0.5 * std::cos(step * i);
        break;
      case WindowKind::kRectangular:
        break;
    }
  }
  return w;
}

void SpectralFrames::Validate() const {
  if (magnitudes.rows() != phases.rows() || magnitudes.cols() != phases.cols()) {
    throw InvalidArgument("magnitude and phase matrices differ in shape");
  }
  if (magnitudes.cols() != config.num_bins()) {
    throw InvalidArgument("expected " + std::to_string(config.num_bins()) +
                          " bins per frame, got " + std::to_string(magnitudes.cols()));
  }
  if (magnitudes.size() > 0 && magnitudes.minCoeff() < 0.0) {
    throw InvalidArgument("negative magnitude");
  }
}

int SynthesisLength(int num_frames, const StftConfig& cfg) {
  return num_frames == 0 ? 0 : (num_frames - 1) * cfg.hop + cfg.fft_size;
}

SpectralFrames Stft(std::span<const double> samples, const StftConfig& cfg) {
  cfg.Validate();
  const int n = cfg.fft_size;
  if (static_cast<int>(samples.size()) < n) {
    throw InvalidArgument("input too short: " + std::to_string(samples.size()) +
                          " samples, need at least " + std::to_string(n));
  }
  const int num_frames = (static_cast<int>(samples.size()) - n) / cfg.hop + 1;
  const int bins = cfg.num_bins();
  const std::vector<double> window = MakeWindow(cfg);

  SpectralFrames out;
  out.config = cfg;
  out.magnitudes.resize(num_frames, bins);
  out.phases.resize(num_frames, bins);

  Eigen::FFT<double> fft = MakeRealFft();
  std::vector<double> frame(n);
  std::vector<Complex> spectrum(bins);
  for (int t = 0; t < num_frames; ++t) {
    const double* src = samples.data() + static_cast<std::size_t>(t) * cfg.hop;
    for (int i = 0; i < n; ++i) frame[i] = src[i] * window[i];
    fft.fwd(spectrum.data(), frame.data(), n);
    // DC and Nyquist are real for real input; pin their phase to {0, pi}.
    spectrum[0].imag(0.0);
    spectrum[bins - 1].imag(0.0);
    for (int k = 0; k < bins; ++k) {
      out.magnitudes(t, k) = std::abs(spectrum[k]);
      out.phases(t, k) = std::arg(spectrum[k]);
    }
  }
  return out;
}

SpectralFrames Stft(const Waveform& w, const StftConfig& cfg) {
  return Stft(std::span<const double>(w.samples), cfg);
}

Waveform Istft(const Matrix& magnitudes, const Matrix& phases, const StftConfig& cfg,
               Synthesis mode, int sample_rate) {
  cfg.Validate();
  if (magnitudes.rows() != phases.rows() || magnitudes.cols() != phases.cols()) {
    throw InvalidArgument("magnitude and phase matrices differ in shape");
  }
  const int bins = cfg.num_bins();
  if (magnitudes.cols() != bins) {
    throw InvalidArgument("expected " + std::to_string(bins) + " bins per frame, got " +
                          std::to_string(magnitudes.cols()));
  }
  if (magnitudes.size() > 0 && !(magnitudes.minCoeff() >= 0.0)) {
    throw InvalidArgument("magnitudes must be non-negative and finite");
  }
  const int n = cfg.fft_size;
  const int num_frames = static_cast<int>(magnitudes.rows());
  const int length = SynthesisLength(num_frames, cfg);
  const std::vector<double> window = MakeWindow(cfg);

  std::vector<double> acc(length, 0.0);
  std::vector<double> envelope(length, 0.0);
  Eigen::FFT<double> fft = MakeRealFft();
  std::vector<Complex> spectrum(bins);
  std::vector<double> frame(n);
  for (int t = 0; t < num_frames; ++t) {
    for (int k = 0; k < bins; ++k) spectrum[k] = std::polar(magnitudes(t, k), phases(t, k));
    fft.inv(frame.data(), spectrum.data(), n);
    const std::size_t offset = static_cast<std::size_t>(t) * cfg.hop;
    if (mode == Synthesis::kEnvelope) {
      for (int i = 0; i < n; ++i) {
        acc[offset + i] += frame[i];
        envelope[offset + i] += window[i];
      }
    } else {
      for (int i = 0; i < n; ++i) {
        acc[offset + i] += frame[i] * window[i];
        envelope[offset + i] += window[i] * window[i];
      }
    }
  }
  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.resize(length);
  for (int i = 0; i < length; ++i) {
    out.samples[i] = envelope[i] > 0.0 ? acc[i] / envelope[i] : 0.0;
  }
  return out;
}

Waveform Istft(const SpectralFrames& frames, Synthesis mode, int sample_rate) {
  return Istft(frames.magnitudes, frames.phases, frames.config, mode, sample_rate);
}

}  // namespace latentsynth::dsp
