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

#include "latentsynth/interp/interp.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "latentsynth/dsp/audio_io.h"

namespace latentsynth::interp {
namespace {

void CheckAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

Matrix Fit(const Matrix& z, Eigen::Index rows) {
  if (z.rows() == rows) return z;
  Matrix out(rows, z.cols());
  for (Eigen::Index r = 0; r < rows; ++r) out.row(r) = z.row(std::min(r, z.rows() - 1));
  return out;
}

}  // namespace

Matrix InterpolateCodes(const Matrix& z1, const Matrix& z2, double alpha, int rows) {
  CheckAlpha(alpha);
  if (z1.cols() != z2.cols()) {
    throw InvalidArgument("code dimensions differ: " + std::to_string(z1.cols()) + " vs " +
                          std::to_string(z2.cols()));
  }
  if (z1.rows() == 0 || z2.rows() == 0) throw InvalidArgument("empty code sequence");
  const Eigen::Index n = rows >= 0 ? rows : (alpha >= 0.5 ? z1.rows() : z2.rows());
  if (alpha == 1.0) return Fit(z1, n);
  if (alpha == 0.0) return Fit(z2, n);
  return alpha * Fit(z1, n) + (1.0 - alpha) * Fit(z2, n);
}

std::vector<double> InterpolateSeries(std::span<const double> a, std::span<const double> b,
                                      double alpha, int length) {
  CheckAlpha(alpha);
  if (a.empty() || b.empty()) throw InvalidArgument("empty series");
  const std::size_t n = length >= 0 ? static_cast<std::size_t>(length)
                                    : (alpha >= 0.5 ? a.size() : b.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a[std::min(i, a.size() - 1)];
    const double y = b[std::min(i, b.size() - 1)];
    out[i] = alpha == 1.0 ? x : alpha == 0.0 ? y : alpha * x + (1.0 - alpha) * y;
  }
  return out;
}

Matrix Rendering::SpectrogramDb() const { return dsp::MagnitudeToDb(magnitudes); }

Rendering DecodeOnto(const models::Model& model, const Matrix& codes,
                     std::span<const double> energy_db, const dataset::SoundFrames& carrier,
                     const SynthesisConfig& cfg) {
  if (cfg.griffin_lim_iters < 0) throw InvalidArgument("griffin_lim_iters must be >= 0");
  if (codes.cols() != model.enc()) {
    throw InvalidArgument("codes have " + std::to_string(codes.cols()) +
                          " dimensions, model expects " + std::to_string(model.enc()));
  }
  if (!codes.allFinite()) throw InvalidArgument("codes contain non-finite values");
  Rendering out;
  out.codes = codes;
  out.energy_db.assign(energy_db.begin(), energy_db.end());
  const Matrix normalized = codes.rows() > 0 ? model.Decode(codes) : Matrix(0, carrier.phases.cols());
  out.magnitudes = dataset::AssembleMagnitudes(carrier, normalized, energy_db, cfg.preproc);
  dsp::GriffinLimResult gl =
      dsp::GriffinLim(out.magnitudes, carrier.phases, cfg.griffin_lim_iters, carrier.stft);
  out.waveform = std::move(gl.waveform);
  out.waveform.sample_rate = carrier.sample_rate;
  if (static_cast<int>(out.waveform.samples.size()) < carrier.num_samples) {
    out.waveform.samples.resize(static_cast<std::size_t>(carrier.num_samples), 0.0);
  }
  return out;
}

Rendering Resynthesize(const models::Model& model, const dataset::SoundFrames& sound,
                       const SynthesisConfig& cfg) {
  const Matrix codes = sound.num_voiced() > 0 ? model.Encode(sound.frames) : Matrix(0, model.enc());
  return DecodeOnto(model, codes, sound.energy_db, sound, cfg);
}

Rendering Hybridize(const models::Model& model, const dataset::SoundFrames& a,
                    const dataset::SoundFrames& b, double alpha, const SynthesisConfig& cfg) {
  CheckAlpha(alpha);
  if (a.num_voiced() == 0 || b.num_voiced() == 0) {
    throw InvalidArgument("both sounds need voiced frames");
  }
  const dataset::SoundFrames& carrier = alpha >= 0.5 ? a : b;
  const Matrix za = model.Encode(a.frames);
  const Matrix zb = model.Encode(b.frames);
  const int n = carrier.num_voiced();
  const Matrix codes = InterpolateCodes(za, zb, alpha, n);
  const std::vector<double> energy = InterpolateSeries(a.energy_db, b.energy_db, alpha, n);
  Rendering out = DecodeOnto(model, codes, energy, carrier, cfg);
  out.length_mismatch = std::abs(a.num_voiced() - b.num_voiced());
  return out;
}

}  // namespace latentsynth::interp
