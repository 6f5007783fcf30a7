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

#include "latentsynth/dsp/griffin_lim.h"

#include <cmath>
#include <string>

namespace latentsynth::dsp {

double SpectralDistance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("spectral distance: shape mismatch");
  }
  const Eigen::Index bins = a.cols();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < bins; ++k) {
    const double weight = (k == 0 || k == bins - 1) ? 1.0 : 2.0;
    sum += weight * (a.col(k) - b.col(k)).squaredNorm();
  }
  return std::sqrt(sum);
}

GriffinLimResult GriffinLim(const Matrix& magnitudes, const Matrix& init_phases,
                            int iterations, const StftConfig& cfg) {
  cfg.Validate();
  if (magnitudes.rows() != init_phases.rows() || magnitudes.cols() != init_phases.cols()) {
    throw InvalidArgument("griffin-lim: magnitude/phase shape mismatch");
  }
  if (magnitudes.cols() != cfg.num_bins()) {
    throw InvalidArgument("griffin-lim: expected " + std::to_string(cfg.num_bins()) +
                          " bins per frame");
  }
  if (iterations < 0) throw InvalidArgument("griffin-lim: negative iteration count");
  if (magnitudes.size() > 0 && !(magnitudes.minCoeff() >= 0.0)) {
    throw InvalidArgument("griffin-lim: magnitudes must be non-negative");
  }

  GriffinLimResult result;
  result.phases = init_phases;
  if (magnitudes.rows() == 0) return result;
  result.inconsistency.reserve(iterations);
  for (int i = 0; i < iterations; ++i) {
    const Waveform estimate =
        Istft(magnitudes, result.phases, cfg, Synthesis::kLeastSquares);
    SpectralFrames reanalysis = Stft(estimate, cfg);
    result.inconsistency.push_back(SpectralDistance(reanalysis.magnitudes, magnitudes));
    result.phases = std::move(reanalysis.phases);
  }
  result.waveform = Istft(magnitudes, result.phases, cfg, Synthesis::kEnvelope);
  return result;
}

}  // namespace latentsynth::dsp
