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

#ifndef LATENTSYNTH_COMMON_H_
#define LATENTSYNTH_COMMON_H_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace latentsynth {

// Row index = frame (or batch item), column index = feature.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Number of positive-frequency bins of a 1024-point real DFT.
inline constexpr int kNumBins = 513;
inline constexpr int kSampleRate = 16000;

// Every failure raised by the library. Callers that need to distinguish
// input problems from runtime problems catch InvalidArgument first.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

}  // namespace latentsynth

#endif  // LATENTSYNTH_COMMON_H_
