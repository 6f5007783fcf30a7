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

#include "latentsynth/pca/pca.h"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace latentsynth::pca {
namespace {

void NormalizeSign(Matrix& components) {
  for (Eigen::Index r = 0; r < components.rows(); ++r) {
    Eigen::Index arg = 0;
    components.row(r).cwiseAbs().maxCoeff(&arg);
    if (components(r, arg) < 0.0) components.row(r) *= -1.0;
  }
}

void CheckDim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw InvalidArgument(std::string("pca ") + what + ": dimension mismatch (" +
                          std::to_string(got) + " vs " + std::to_string(want) + ")");
  }
}

}  // namespace

double PcaModel::TailVariance() const {
  return std::max(0.0, total_variance - eigenvalues.sum());
}

double PcaModel::TrainingMse() const {
  if (num_observations == 0 || dim() == 0) return 0.0;
  const double n = num_observations;
  const double divisor = std::max(n - 1.0, 1.0);
  return divisor / (n * dim()) * TailVariance();
}

PcaModel Fit(const Matrix& data, int enc) {
  const Eigen::Index n = data.rows();
  const Eigen::Index dim = data.cols();
  if (enc < 1) throw InvalidArgument("pca: enc must be >= 1");
  if (n < enc) {
    throw InvalidArgument("pca: need at least enc observations (" + std::to_string(n) +
                          " < " + std::to_string(enc) + ")");
  }
  if (enc > dim) throw InvalidArgument("pca: enc exceeds data dimension");

  PcaModel model;
  model.num_observations = static_cast<int>(n);
  model.mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - model.mean.transpose();
  const double divisor = std::max<double>(static_cast<double>(n) - 1.0, 1.0);
  model.total_variance = centered.squaredNorm() / divisor;

  model.components.resize(enc, dim);
  model.eigenvalues.resize(enc);
  if (n >= dim) {
    const Matrix cov = (centered.transpose() * centered) / divisor;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    if (solver.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");
    // Eigenvalues come back in ascending order.
    for (int i = 0; i < enc; ++i) {
      const Eigen::Index src = dim - 1 - i;
      model.eigenvalues[i] = std::max(0.0, solver.eigenvalues()[src]);
      model.components.row(i) = solver.eigenvectors().col(src).transpose();
    }
  } else {
    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    for (int i = 0; i < enc; ++i) {
      const double sv = i < s.size() ? s[i] : 0.0;
      model.eigenvalues[i] = sv * sv / divisor;
      model.components.row(i) = svd.matrixV().col(i).transpose();
    }
  }
  NormalizeSign(model.components);
  return model;
}

Matrix Encode(const PcaModel& model, const Matrix& x) {
  CheckDim(x.cols(), model.dim(), "encode");
  return (x.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Matrix Decode(const PcaModel& model, const Matrix& z) {
  CheckDim(z.cols(), model.enc(), "decode");
  return (z * model.components).rowwise() + model.mean.transpose();
}

Vector Encode(const PcaModel& model, const Vector& x) {
  CheckDim(x.size(), model.dim(), "encode");
  return model.components * (x - model.mean);
}

Vector Decode(const PcaModel& model, const Vector& z) {
  CheckDim(z.size(), model.enc(), "decode");
  return model.mean + model.components.transpose() * z;
}

}  // namespace latentsynth::pca
