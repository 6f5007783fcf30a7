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

#ifndef LATENTSYNTH_NN_LAYERS_H_
#define LATENTSYNTH_NN_LAYERS_H_

#include <random>
#include <string>
#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/nn/graph.h"

namespace latentsynth::nn {

using Rng = std::mt19937_64;

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
Matrix GlorotUniform(int rows, int cols, int fan_in, int fan_out, Rng& rng);

// y = activation(x W^T + b), weight is out x in.
struct DenseParams {
  Parameter weight;
  Parameter bias;
  Activation activation = Activation::kLinear;

  int in() const { return static_cast<int>(weight.value.cols()); }
  int out() const { return static_cast<int>(weight.value.rows()); }
};

DenseParams MakeDense(const std::string& name, int in, int out, Activation act, Rng& rng);
// All-zero weights and bias.
DenseParams MakeZeroDense(const std::string& name, int in, int out, Activation act);

Graph::Var DenseForward(Graph& g, const DenseParams& p, Graph::Var x);
// Evaluates the layer on a batch (rows) without recording gradients.
Matrix DenseForward(const DenseParams& p, const Matrix& x);

// Standard LSTM cell:
//   i = sigmoid(x Wi^T + h Ui^T + bi)     f = sigmoid(x Wf^T + h Uf^T + bf)
//   o = sigmoid(x Wo^T + h Uo^T + bo)     c~ = tanh(x Wc^T + h Uc^T + bc)
//   c' = f * c + i * c~                    h' = o * tanh(c')
// Hidden and cell state start at zero; the layer output is h at every step.
struct LstmParams {
  Parameter w_i, w_f, w_o, w_c;  // hidden x input
  Parameter u_i, u_f, u_o, u_c;  // hidden x hidden
  Parameter b_i, b_f, b_o, b_c;  // hidden x 1

  int input_size() const { return static_cast<int>(w_i.value.cols()); }
  int hidden_size() const { return static_cast<int>(w_i.value.rows()); }

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
};

// Glorot-uniform per gate, zero biases except the forget gate (1.0).
LstmParams MakeLstm(const std::string& name, int input, int hidden, Rng& rng);
LstmParams MakeZeroLstm(const std::string& name, int input, int hidden);

// xs[t] is batch x input. Throws InvalidArgument on an empty sequence.
std::vector<Graph::Var> LstmForward(Graph& g, const LstmParams& p,
                                    const std::vector<Graph::Var>& xs);
// Single-sequence evaluation: rows of xs are time steps; returns T x hidden.
Matrix LstmForward(const LstmParams& p, const Matrix& xs);

}  // namespace latentsynth::nn

#endif  // LATENTSYNTH_NN_LAYERS_H_
