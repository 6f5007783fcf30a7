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

#ifndef LATENTSYNTH_NN_GRAPH_H_
#define LATENTSYNTH_NN_GRAPH_H_

#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "latentsynth/common.h"

namespace latentsynth::nn {

// A named trainable matrix. Biases are stored as column vectors.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  void ZeroGrad() { grad.setZero(value.rows(), value.cols()); }
};

enum class Activation { kTanh, kSigmoid, kLinear };

const char* ActivationName(Activation a);
// Accepts "tanh", "sigmoid", "linear".
Activation ParseActivation(const std::string& name);

// Tape of one forward computation over 2-D matrices (rows = batch).
//
// Nodes are appended in evaluation order, so reverse insertion order is a
// valid topological order for the backward sweep. Parameters are bound by
// reference and never modified; after Backward their gradients are read
// out with AccumulateGradients. Every op checks its output for NaN/Inf.
//
// A Graph records a single pass: Backward may be called once.
class Graph {
 public:
  enum class Mode { kTraining, kInference };

  struct Var {
    int id = -1;
  };

  explicit Graph(Mode mode = Mode::kTraining) : mode_(mode) {}

  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var Constant(Matrix value);
  // Binds p.value without copying; p must outlive the graph. Binding the same
  // parameter twice returns the same node.
  Var Param(const Parameter& p);

  Var MatMulT(Var x, Var w);  // x * w^T
  Var AddBias(Var x, Var b);  // b is a column vector with x.cols() entries
  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  Var Mul(Var a, Var b);  // element-wise
  Var Scale(Var a, double s);
  Var AddScalar(Var a, double s);
  Var Tanh(Var a);
  Var Sigmoid(Var a);
  Var Exp(Var a);
  Var Square(Var a);
  Var Clamp(Var a, double lo, double hi);
  Var Activate(Var a, Activation act);
  Var Sum(Var a);   // 1x1
  Var Mean(Var a);  // 1x1

  const Matrix& value(Var v) const;
  double scalar(Var v) const;
  // Gradient of the backward root w.r.t. v; empty if v does not influence it.
  const Matrix& grad(Var v) const;

  // Seeds d(root)/d(root) = 1 for a 1x1 root.
  void Backward(Var root);
  void Backward(Var root, const Matrix& seed);

  // Adds the recorded gradient of each bound parameter to its .grad.
  void AccumulateGradients(std::span<Parameter* const> params) const;

  Mode mode() const { return mode_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    const Matrix* ref = nullptr;
    Matrix grad;
    bool needs_grad = false;
    std::function<void(Graph&, const Node&)> backward;
  };

  const Matrix& ValueOf(int id) const;
  Var Push(Matrix value, bool needs_grad, const char* op,
           std::function<void(Graph&, const Node&)> backward);
  bool NeedsGrad(Var v) const;
  void AccumulateGrad(int id, const Matrix& g);
  void CheckShapeEqual(Var a, Var b, const char* op) const;

  Mode mode_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> bound_;
  bool backward_done_ = false;
};

}  // namespace latentsynth::nn

#endif  // LATENTSYNTH_NN_GRAPH_H_
