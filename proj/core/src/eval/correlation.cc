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

#include "latentsynth/eval/correlation.h"

#include <algorithm>
#include <cmath>

namespace latentsynth::eval {

Matrix AbsolutePearson(const Matrix& codes, std::vector<bool>* dead) {
  const Eigen::Index d = codes.cols();
  if (codes.rows() < 2) throw InvalidArgument("correlation needs at least two frames");
  const Matrix centered = codes.rowwise() - codes.colwise().mean();
  const Vector norms = centered.colwise().norm().transpose();
  const double scale = std::max(1.0, codes.cwiseAbs().maxCoeff());
  std::vector<bool> is_dead(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    // Relative to the code magnitude so that rounding noise on a constant
    // column does not count as variance.
    is_dead[static_cast<std::size_t>(i)] =
        norms(i) <= 1e-12 * scale * std::sqrt(double(codes.rows()));
  }
  Matrix r = Matrix::Identity(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      double v = 0.0;
      if (!is_dead[static_cast<std::size_t>(i)] && !is_dead[static_cast<std::size_t>(j)]) {
        v = std::min(1.0, std::abs(centered.col(i).dot(centered.col(j))) / (norms(i) * norms(j)));
      }
      r(i, j) = r(j, i) = v;
    }
  }
  if (dead) *dead = std::move(is_dead);
  return r;
}

double CorrelationMatrix::MeanOffDiagonal() const {
  const Eigen::Index d = values.rows();
  if (d < 2) return 0.0;
  return (values.sum() - values.trace()) / static_cast<double>(d * (d - 1));
}

CorrelationMatrix LatentCorrelation(const models::Model& model,
                                    const std::vector<Matrix>& sounds) {
  const int enc = model.enc();
  if (enc < 2) throw InvalidArgument("latent correlation needs enc >= 2");
  CorrelationMatrix out;
  out.values = Matrix::Zero(enc, enc);
  out.dead_counts.assign(static_cast<std::size_t>(enc), 0);
  for (const Matrix& frames : sounds) {
    if (frames.rows() < 2) continue;
    std::vector<bool> dead;
    out.values += AbsolutePearson(model.Encode(frames), &dead);
    for (int i = 0; i < enc; ++i) out.dead_counts[static_cast<std::size_t>(i)] += dead[i] ? 1 : 0;
    ++out.num_sounds;
  }
  if (out.num_sounds == 0) throw InvalidArgument("no sound has two or more frames");
  out.values /= out.num_sounds;
  out.values.diagonal().setOnes();
  return out;
}

}  // namespace latentsynth::eval
