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

#ifndef LATENTSYNTH_PCA_PCA_H_
#define LATENTSYNTH_PCA_PCA_H_

#include "latentsynth/common.h"

namespace latentsynth::pca {

// Principal subspace of a data matrix (rows = observations).
//
// components holds enc orthonormal rows sorted by decreasing variance; each
// row is sign-normalized so that its largest-magnitude entry is positive.
// eigenvalues are variances of the sample covariance (divisor n - 1) along
// each component. total_variance is the trace of that covariance, so the
// variance left out by the model is total_variance - eigenvalues.sum().
struct PcaModel {
  Vector mean;
  Matrix components;  // enc x dim
  Vector eigenvalues;  // enc
  double total_variance = 0.0;
  int num_observations = 0;

  int enc() const { return static_cast<int>(components.rows()); }
  int dim() const { return static_cast<int>(mean.size()); }

  // Sum of the eigenvalues that were discarded.
  double TailVariance() const;
  // Mean squared per-entry training reconstruction error implied by the
  // eigenvalue tail: (n - 1) / (n * dim) * tail.
  double TrainingMse() const;
};

// Requires data.rows() >= enc >= 1. Rank-deficient data yields zero
// eigenvalues. The covariance is never formed when n < dim; a thin SVD of
// the centered data is used instead.
PcaModel Fit(const Matrix& data, int enc);

// Row-wise: z = components * (x - mean).
Matrix Encode(const PcaModel& model, const Matrix& x);
// Row-wise: x = mean + components^T * z.
Matrix Decode(const PcaModel& model, const Matrix& z);

Vector Encode(const PcaModel& model, const Vector& x);
Vector Decode(const PcaModel& model, const Vector& z);

}  // namespace latentsynth::pca

#endif  // LATENTSYNTH_PCA_PCA_H_
