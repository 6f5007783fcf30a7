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

#include "latentsynth/eval/metrics.h"

#include <cmath>

#include <boost/math/distributions/students_t.hpp>

namespace latentsynth::eval {
namespace {

void CheckShapes(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("spectra differ in shape: " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
  if (a.size() == 0) throw InvalidArgument("empty spectra");
}

}  // namespace

double RmseDb(const Matrix& a_db, const Matrix& b_db) {
  CheckShapes(a_db, b_db);
  return std::sqrt((a_db - b_db).squaredNorm() / static_cast<double>(a_db.size()));
}

double LogSpectralDistance(const Matrix& a_db, const Matrix& b_db) {
  CheckShapes(a_db, b_db);
  const Matrix d = a_db - b_db;
  double sum = 0.0;
  for (Eigen::Index t = 0; t < d.rows(); ++t) {
    sum += std::sqrt(d.row(t).squaredNorm() / static_cast<double>(d.cols()));
  }
  return sum / static_cast<double>(d.rows());
}

SoundScore ScoreSound(const models::Model& model, const dataset::SoundFrames& sound,
                      const dsp::PreprocConfig& preproc) {
  if (sound.num_voiced() == 0) throw InvalidArgument("sound " + sound.id + " has no voiced frames");
  const Matrix recon = model.Reconstruct(sound.frames);
  const Matrix original_db = dsp::NormalizedToDb(sound.frames, sound.energy_db, preproc);
  const Matrix recon_db = dsp::NormalizedToDb(recon, sound.energy_db, preproc);
  SoundScore s;
  s.id = sound.id;
  s.rmse_db = RmseDb(original_db, recon_db);
  s.lsd_db = LogSpectralDistance(original_db, recon_db);
  return s;
}

MeanCi MeanWithCi(const std::vector<double>& values) {
  MeanCi out;
  out.n = static_cast<int>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / out.n;
  if (out.n < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / (out.n - 1));
  const boost::math::students_t dist(out.n - 1);
  out.half_width = boost::math::quantile(dist, 0.975) * sd / std::sqrt(double(out.n));
  return out;
}

MeanCi PairedDifference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidArgument("paired samples differ in length");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return MeanWithCi(d);
}

}  // namespace latentsynth::eval
