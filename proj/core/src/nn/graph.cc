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

#include "latentsynth/nn/graph.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace latentsynth::nn {
namespace {

double StableSigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

const char* ActivationName(Activation a) {
  switch (a) {
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kLinear:
      return "linear";
  }
  return "?";
}

Activation ParseActivation(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "linear") return Activation::kLinear;
  throw InvalidArgument("unknown activation '" + name + "'");
}

const Matrix& Graph::ValueOf(int id) const {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  return n.ref ? *n.ref : n.value;
}

const Matrix& Graph::value(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size())) {
    throw InvalidArgument("graph: invalid variable");
  }
  return ValueOf(v.id);
}

double Graph::scalar(Var v) const {
  const Matrix& m = value(v);
  if (m.rows() != 1 || m.cols() != 1) throw InvalidArgument("graph: value is not a scalar");
  return m(0, 0);
}

const Matrix& Graph::grad(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size())) {
    throw InvalidArgument("graph: invalid variable");
  }
  return nodes_[static_cast<std::size_t>(v.id)].grad;
}

bool Graph::NeedsGrad(Var v) const {
  return nodes_[static_cast<std::size_t>(v.id)].needs_grad;
}

Graph::Var Graph::Push(Matrix value, bool needs_grad, const char* op,
                       std::function<void(Graph&, const Node&)> backward) {
  if (!value.allFinite()) {
    throw Error(std::string("non-finite value produced by ") + op);
  }
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad && mode_ == Mode::kTraining;
  if (n.needs_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

void Graph::AccumulateGrad(int id, const Matrix& g) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (!n.needs_grad) return;
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

void Graph::CheckShapeEqual(Var a, Var b, const char* op) const {
  const Matrix& x = value(a);
  const Matrix& y = value(b);
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InvalidArgument(std::string(op) + ": shape mismatch " + std::to_string(x.rows()) +
                          "x" + std::to_string(x.cols()) + " vs " + std::to_string(y.rows()) +
                          "x" + std::to_string(y.cols()));
  }
}

Graph::Var Graph::Constant(Matrix value) {
  return Push(std::move(value), false, "constant", nullptr);
}

Graph::Var Graph::Param(const Parameter& p) {
  if (auto it = bound_.find(&p); it != bound_.end()) return Var{it->second};
  if (!p.value.allFinite()) throw Error("parameter " + p.name + " holds non-finite values");
  Node n;
  n.ref = &p.value;
  n.needs_grad = mode_ == Mode::kTraining;
  nodes_.push_back(std::move(n));
  const int id = static_cast<int>(nodes_.size()) - 1;
  bound_.emplace(&p, id);
  return Var{id};
}

Graph::Var Graph::MatMulT(Var x, Var w) {
  const Matrix& xv = value(x);
  const Matrix& wv = value(w);
  if (xv.cols() != wv.cols()) {
    throw InvalidArgument("matmul: inner dimension mismatch (" + std::to_string(xv.cols()) +
                          " vs " + std::to_string(wv.cols()) + ")");
  }
  Matrix out = xv * wv.transpose();
  return Push(std::move(out), NeedsGrad(x) || NeedsGrad(w), "matmul",
              [x, w](Graph& g, const Node& self) {
                if (g.NeedsGrad(x)) g.AccumulateGrad(x.id, self.grad * g.ValueOf(w.id));
                if (g.NeedsGrad(w)) {
                  g.AccumulateGrad(w.id, self.grad.transpose() * g.ValueOf(x.id));
                }
              });
}

Graph::Var Graph::AddBias(Var x, Var b) {
  const Matrix& xv = value(x);
  const Matrix& bv = value(b);
  if (bv.cols() != 1 || bv.rows() != xv.cols()) {
    throw InvalidArgument("add_bias: bias must be a column vector of size " +
                          std::to_string(xv.cols()));
  }
  Matrix out = xv.rowwise() + bv.col(0).transpose();
  return Push(std::move(out), NeedsGrad(x) || NeedsGrad(b), "add_bias",
              [x, b](Graph& g, const Node& self) {
                if (g.NeedsGrad(x)) g.AccumulateGrad(x.id, self.grad);
                if (g.NeedsGrad(b)) {
                  g.AccumulateGrad(b.id, self.grad.colwise().sum().transpose());
                }
              });
}

Graph::Var Graph::Add(Var a, Var b) {
  CheckShapeEqual(a, b, "add");
  Matrix out = value(a) + value(b);
  return Push(std::move(out), NeedsGrad(a) || NeedsGrad(b), "add",
              [a, b](Graph& g, const Node& self) {
                g.AccumulateGrad(a.id, self.grad);
                g.AccumulateGrad(b.id, self.grad);
              });
}

Graph::Var Graph::Sub(Var a, Var b) {
  CheckShapeEqual(a, b, "sub");
  Matrix out = value(a) - value(b);
  return Push(std::move(out), NeedsGrad(a) || NeedsGrad(b), "sub",
              [a, b](Graph& g, const Node& self) {
                g.AccumulateGrad(a.id, self.grad);
                if (g.NeedsGrad(b)) g.AccumulateGrad(b.id, -self.grad);
              });
}

Graph::Var Graph::Mul(Var a, Var b) {
  CheckShapeEqual(a, b, "mul");
  Matrix out = value(a).cwiseProduct(value(b));
  return Push(std::move(out), NeedsGrad(a) || NeedsGrad(b), "mul",
              [a, b](Graph& g, const Node& self) {
                if (g.NeedsGrad(a)) {
                  g.AccumulateGrad(a.id, self.grad.cwiseProduct(g.ValueOf(b.id)));
                }
                if (g.NeedsGrad(b)) {
                  g.AccumulateGrad(b.id, self.grad.cwiseProduct(g.ValueOf(a.id)));
                }
              });
}

Graph::Var Graph::Scale(Var a, double s) {
  Matrix out = value(a) * s;
  return Push(std::move(out), NeedsGrad(a), "scale",
              [a, s](Graph& g, const Node& self) { g.AccumulateGrad(a.id, self.grad * s); });
}

Graph::Var Graph::AddScalar(Var a, double s) {
  Matrix out = value(a).array() + s;
  return Push(std::move(out), NeedsGrad(a), "add_scalar",
              [a](Graph& g, const Node& self) { g.AccumulateGrad(a.id, self.grad); });
}

Graph::Var Graph::Tanh(Var a) {
  Matrix out = value(a).array().tanh().matrix();
  return Push(std::move(out), NeedsGrad(a), "tanh", [a](Graph& g, const Node& self) {
    g.AccumulateGrad(a.id, (self.grad.array() * (1.0 - self.value.array().square())).matrix());
  });
}

Graph::Var Graph::Sigmoid(Var a) {
  Matrix out = value(a).unaryExpr(&StableSigmoid);
  return Push(std::move(out), NeedsGrad(a), "sigmoid", [a](Graph& g, const Node& self) {
    const auto y = self.value.array();
    g.AccumulateGrad(a.id, (self.grad.array() * y * (1.0 - y)).matrix());
  });
}

Graph::Var Graph::Exp(Var a) {
  Matrix out = value(a).array().exp().matrix();
  return Push(std::move(out), NeedsGrad(a), "exp", [a](Graph& g, const Node& self) {
    g.AccumulateGrad(a.id, self.grad.cwiseProduct(self.value));
  });
}

Graph::Var Graph::Square(Var a) {
  Matrix out = value(a).array().square().matrix();
  return Push(std::move(out), NeedsGrad(a), "square", [a](Graph& g, const Node& self) {
    g.AccumulateGrad(a.id, 2.0 * self.grad.cwiseProduct(g.ValueOf(a.id)));
  });
}

Graph::Var Graph::Clamp(Var a, double lo, double hi) {
  if (!(lo <= hi)) throw InvalidArgument("clamp: lo > hi");
  Matrix out = value(a).cwiseMax(lo).cwiseMin(hi);
  return Push(std::move(out), NeedsGrad(a), "clamp", [a, lo, hi](Graph& g, const Node& self) {
    const Matrix& x = g.ValueOf(a.id);
    Matrix pass = self.grad;
    for (Eigen::Index i = 0; i < pass.size(); ++i) {
      if (x.data()[i] < lo || x.data()[i] > hi) pass.data()[i] = 0.0;
    }
    g.AccumulateGrad(a.id, pass);
  });
}

Graph::Var Graph::Activate(Var a, Activation act) {
  switch (act) {
    case Activation::kTanh:
      return Tanh(a);
    case Activation::kSigmoid:
      return Sigmoid(a);
    case Activation::kLinear:
      return a;
  }
  return a;
}

Graph::Var Graph::Sum(Var a) {
  Matrix out(1, 1);
  out(0, 0) = value(a).sum();
  return Push(std::move(out), NeedsGrad(a), "sum", [a](Graph& g, const Node& self) {
    const Matrix& x = g.ValueOf(a.id);
    g.AccumulateGrad(a.id, Matrix::Constant(x.rows(), x.cols(), self.grad(0, 0)));
  });
}

Graph::Var Graph::Mean(Var a) {
  const Matrix& v = value(a);
  if (v.size() == 0) throw InvalidArgument("mean of an empty matrix");
  Matrix out(1, 1);
  out(0, 0) = v.mean();
  return Push(std::move(out), NeedsGrad(a), "mean", [a](Graph& g, const Node& self) {
    const Matrix& x = g.ValueOf(a.id);
    const double scale = self.grad(0, 0) / static_cast<double>(x.size());
    g.AccumulateGrad(a.id, Matrix::Constant(x.rows(), x.cols(), scale));
  });
}

void Graph::Backward(Var root) {
  const Matrix& v = value(root);
  if (v.rows() != 1 || v.cols() != 1) {
    throw InvalidArgument("backward: root must be a scalar; pass an explicit seed");
  }
  Backward(root, Matrix::Ones(1, 1));
}

void Graph::Backward(Var root, const Matrix& seed) {
  if (mode_ != Mode::kTraining) throw Error("backward on an inference-mode graph");
  if (backward_done_) throw Error("backward already ran on this recording");
  const Matrix& v = value(root);
  if (seed.rows() != v.rows() || seed.cols() != v.cols()) {
    throw InvalidArgument("backward: seed shape does not match root");
  }
  backward_done_ = true;
  AccumulateGrad(root.id, seed);
  for (int i = root.id; i >= 0; --i) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.backward && n.grad.size() > 0) n.backward(*this, n);
  }
}

void Graph::AccumulateGradients(std::span<Parameter* const> params) const {
  for (Parameter* p : params) {
    auto it = bound_.find(p);
    if (it == bound_.end()) continue;
    const Matrix& g = nodes_[static_cast<std::size_t>(it->second)].grad;
    if (g.size() == 0) continue;
    if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols()) {
      p->ZeroGrad();
    }
    p->grad += g;
  }
}

}  // namespace latentsynth::nn
