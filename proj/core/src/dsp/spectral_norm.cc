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

#include "latentsynth/dsp/spectral_norm.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace latentsynth::dsp {

void PreprocConfig::Validate() const {
  if (!(threshold_db < peak_target_db)) {
    throw InvalidArgument("threshold_db must be below peak_target_db");
  }
}

NormalizedFrame Preprocess(std::span<const double> magnitudes, const PreprocConfig& cfg) {
  cfg.Validate();
  if (magnitudes.empty()) throw InvalidArgument("empty frame");
  double peak_mag = 0.0;
  for (double m : magnitudes) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw InvalidArgument("magnitudes must be finite and non-negative");
    }
    peak_mag = std::max(peak_mag, m);
  }
  if (peak_mag == 0.0) throw InvalidArgument("silent frame");

  const double span_db = cfg.peak_target_db - cfg.threshold_db;
  NormalizedFrame out;
  out.energy_db = 20.0 * std::log10(peak_mag + kLogFloorGuard);
  out.values.resize(static_cast<Eigen::Index>(magnitudes.size()));
  for (std::size_t k = 0; k < magnitudes.size(); ++k) {
    const double db = 20.0 * std::log10(magnitudes[k] + kLogFloorGuard);
    const double rel = std::max(db - out.energy_db + cfg.peak_target_db, cfg.threshold_db);
    out.values[static_cast<Eigen::Index>(k)] = 2.0 * (rel - cfg.threshold_db) / span_db - 1.0;
  }
  return out;
}

NormalizedFrame Preprocess(const Vector& magnitudes, const PreprocConfig& cfg) {
  return Preprocess(std::span<const double>(magnitudes.data(), magnitudes.size()), cfg);
}

Vector Postprocess(const NormalizedFrame& frame, const PreprocConfig& cfg) {
  cfg.Validate();
  const double span_db = cfg.peak_target_db - cfg.threshold_db;
  Vector out(frame.values.size());
  for (Eigen::Index k = 0; k < frame.values.size(); ++k) {
    const double v = std::clamp(frame.values[k], -1.0, 1.0);
    const double rel = cfg.threshold_db + 0.5 * (v + 1.0) * span_db;
    const double db = rel - cfg.peak_target_db + frame.energy_db;
    out[k] = std::max(0.0, std::pow(10.0, db / 20.0) - kLogFloorGuard);
  }
  return out;
}

Matrix NormalizedToDb(const Matrix& values, std::span<const double> energy_db,
                      const PreprocConfig& cfg) {
  cfg.Validate();
  if (static_cast<Eigen::Index>(energy_db.size()) != values.rows()) {
    throw InvalidArgument("one energy value per frame required");
  }
  const double span_db = cfg.peak_target_db - cfg.threshold_db;
  Matrix db(values.rows(), values.cols());
  for (Eigen::Index t = 0; t < values.rows(); ++t) {
    for (Eigen::Index k = 0; k < values.cols(); ++k) {
      const double v = std::clamp(values(t, k), -1.0, 1.0);
      db(t, k) = cfg.threshold_db + 0.5 * (v + 1.0) * span_db - cfg.peak_target_db +
                 energy_db[static_cast<std::size_t>(t)];
    }
  }
  return db;
}

Matrix DbToMagnitude(const Matrix& db) {
  return db.unaryExpr([](double x) {
    return std::max(0.0, std::pow(10.0, x / 20.0) - kLogFloorGuard);
  });
}

std::vector<int> VoicedFrameIndices(const SpectralFrames& frames, double floor_db) {
  std::vector<int> kept;
  const int n = frames.num_frames();
  if (std::isinf(floor_db) && floor_db < 0) {
    kept.resize(n);
    for (int t = 0; t < n; ++t) kept[t] = t;
    return kept;
  }
  if (n == 0) return kept;
  const double global_peak = frames.magnitudes.maxCoeff();
  if (!(global_peak > 0.0)) return kept;
  const double min_level = global_peak * std::pow(10.0, floor_db / 20.0);
  for (int t = 0; t < n; ++t) {
    const double frame_peak = frames.magnitudes.row(t).maxCoeff();
    if (frame_peak > 0.0 && frame_peak >= min_level) kept.push_back(t);
  }
  return kept;
}

SpectralFrames RemoveSilence(const SpectralFrames& frames, double floor_db) {
  const std::vector<int> kept = VoicedFrameIndices(frames, floor_db);
  SpectralFrames out;
  out.config = frames.config;
  out.magnitudes.resize(static_cast<Eigen::Index>(kept.size()), frames.magnitudes.cols());
  out.phases.resize(static_cast<Eigen::Index>(kept.size()), frames.phases.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.magnitudes.row(static_cast<Eigen::Index>(i)) = frames.magnitudes.row(kept[i]);
    out.phases.row(static_cast<Eigen::Index>(i)) = frames.phases.row(kept[i]);
  }
  return out;
}

}  // namespace latentsynth::dsp
