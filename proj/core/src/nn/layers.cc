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

#include "latentsynth/nn/layers.h"

#include <cmath>

namespace latentsynth::nn {
namespace {

Parameter MakeParam(std::string name, Matrix value) {
  Parameter p;
  p.name = std::move(name);
  p.value = std::move(value);
  p.ZeroGrad();
  return p;
}

}  // namespace

Matrix GlorotUniform(int rows, int cols, int fan_in, int fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  // Fill in row-major order so the draw sequence does not depend on storage.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = dist(rng);
  }
  return m;
}

DenseParams MakeDense(const std::string& name, int in, int out, Activation act, Rng& rng) {
  if (in < 1 || out < 1) throw InvalidArgument("dense layer sizes must be positive");
  DenseParams p;
  p.weight = MakeParam(name + ".W", GlorotUniform(out, in, in, out, rng));
  p.bias = MakeParam(name + ".b", Matrix::Zero(out, 1));
  p.activation = act;
  return p;
}

DenseParams MakeZeroDense(const std::string& name, int in, int out, Activation act) {
  DenseParams p;
  p.weight = MakeParam(name + ".W", Matrix::Zero(out, in));
  p.bias = MakeParam(name + ".b", Matrix::Zero(out, 1));
  p.activation = act;
  return p;
}

Graph::Var DenseForward(Graph& g, const DenseParams& p, Graph::Var x) {
  const Graph::Var w = g.Param(p.weight);
  const Graph::Var b = g.Param(p.bias);
  return g.Activate(g.AddBias(g.MatMulT(x, w), b), p.activation);
}

Matrix DenseForward(const DenseParams& p, const Matrix& x) {
  Graph g(Graph::Mode::kInference);
  return g.value(DenseForward(g, p, g.Constant(x)));
}

std::vector<Parameter*> LstmParams::parameters() {
  return {&w_i, &w_f, &w_o, &w_c, &u_i, &u_f, &u_o, &u_c, &b_i, &b_f, &b_o, &b_c};
}

std::vector<const Parameter*> LstmParams::parameters() const {
  return {&w_i, &w_f, &w_o, &w_c, &u_i, &u_f, &u_o, &u_c, &b_i, &b_f, &b_o, &b_c};
}

LstmParams MakeLstm(const std::string& name, int input, int hidden, Rng& rng) {
  if (input < 1 || hidden < 1) throw InvalidArgument("lstm sizes must be positive");
  LstmParams p;
  p.w_i = MakeParam(name + ".Wi", GlorotUniform(hidden, input, input, hidden, rng));
  p.w_f = MakeParam(name + ".Wf", GlorotUniform(hidden, input, input, hidden, rng));
  p.w_o = MakeParam(name + ".Wo", GlorotUniform(hidden, input, input, hidden, rng));
  p.w_c = MakeParam(name + ".Wc", GlorotUniform(hidden, input, input, hidden, rng));
  p.u_i = MakeParam(name + ".Ui", GlorotUniform(hidden, hidden, hidden, hidden, rng));
  p.u_f = MakeParam(name + ".Uf", GlorotUniform(hidden, hidden, hidden, hidden, rng));
  p.u_o = MakeParam(name + ".Uo", GlorotUniform(hidden, hidden, hidden, hidden, rng));
  p.u_c = MakeParam(name + ".Uc", GlorotUniform(hidden, hidden, hidden, hidden, rng));
  p.b_i = MakeParam(name + ".bi", Matrix::Zero(hidden, 1));
  p.b_f = MakeParam(name + ".bf", Matrix::Ones(hidden, 1));
  p.b_o = MakeParam(name + ".bo", Matrix::Zero(hidden, 1));
  p.b_c = MakeParam(name + ".bc", Matrix::Zero(hidden, 1));
  return p;
}

LstmParams MakeZeroLstm(const std::string& name, int input, int hidden) {
  LstmParams p;
  p.w_i = MakeParam(name + ".Wi", Matrix::Zero(hidden, input));
  p.w_f = MakeParam(name + ".Wf", Matrix::Zero(hidden, input));
  p.w_o = MakeParam(name + ".Wo", Matrix::Zero(hidden, input));
  p.w_c = MakeParam(name + ".Wc", Matrix::Zero(hidden, input));
  p.u_i = MakeParam(name + ".Ui", Matrix::Zero(hidden, hidden));
  p.u_f = MakeParam(name + ".Uf", Matrix::Zero(hidden, hidden));
  p.u_o = MakeParam(name + ".Uo", Matrix::Zero(hidden, hidden));
  p.u_c = MakeParam(name + ".Uc", Matrix::Zero(hidden, hidden));
  p.b_i = MakeParam(name + ".bi", Matrix::Zero(hidden, 1));
  p.b_f = MakeParam(name + ".bf", Matrix::Zero(hidden, 1));
  p.b_o = MakeParam(name + ".bo", Matrix::Zero(hidden, 1));
  p.b_c = MakeParam(name + ".bc", Matrix::Zero(hidden, 1));
  return p;
}

std::vector<Graph::Var> LstmForward(Graph& g, const LstmParams& p,
                                    const std::vector<Graph::Var>& xs) {
  if (xs.empty()) throw InvalidArgument("lstm: empty sequence");
  const Eigen::Index batch = g.value(xs.front()).rows();
  const int hidden = p.hidden_size();
  const auto wi = g.Param(p.w_i), wf = g.Param(p.w_f), wo = g.Param(p.w_o),
             wc = g.Param(p.w_c);
  const auto ui = g.Param(p.u_i), uf = g.Param(p.u_f), uo = g.Param(p.u_o),
             uc = g.Param(p.u_c);
  const auto bi = g.Param(p.b_i), bf = g.Param(p.b_f), bo = g.Param(p.b_o),
             bc = g.Param(p.b_c);

  auto gate = [&](Graph::Var x, Graph::Var h, Graph::Var w, Graph::Var u, Graph::Var b,
                  bool first) {
    Graph::Var pre = g.MatMulT(x, w);
    if (!first) pre = g.Add(pre, g.MatMulT(h, u));
    return g.AddBias(pre, b);
  };

  std::vector<Graph::Var> hs;
  hs.reserve(xs.size());
  Graph::Var h = g.Constant(Matrix::Zero(batch, hidden));
  Graph::Var c = h;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const Graph::Var x = xs[t];
    if (g.value(x).rows() != batch) throw InvalidArgument("lstm: batch size changes over time");
    // With zero initial state the recurrent products vanish; skip them.
    const bool first = t == 0;
    const Graph::Var i = g.Sigmoid(gate(x, h, wi, ui, bi, first));
    const Graph::Var f = g.Sigmoid(gate(x, h, wf, uf, bf, first));
    const Graph::Var o = g.Sigmoid(gate(x, h, wo, uo, bo, first));
    const Graph::Var cand = g.Tanh(gate(x, h, wc, uc, bc, first));
    c = first ? g.Mul(i, cand) : g.Add(g.Mul(f, c), g.Mul(i, cand));
    h = g.Mul(o, g.Tanh(c));
    hs.push_back(h);
  }
  return hs;
}

Matrix LstmForward(const LstmParams& p, const Matrix& xs) {
  Graph g(Graph::Mode::kInference);
  std::vector<Graph::Var> steps;
  steps.reserve(static_cast<std::size_t>(xs.rows()));
  for (Eigen::Index t = 0; t < xs.rows(); ++t) steps.push_back(g.Constant(xs.row(t)));
  const std::vector<Graph::Var> hs = LstmForward(g, p, steps);
  Matrix out(xs.rows(), p.hidden_size());
  for (std::size_t t = 0; t < hs.size(); ++t) out.row(static_cast<Eigen::Index>(t)) = g.value(hs[t]);
  return out;
}

}  // namespace latentsynth::nn
