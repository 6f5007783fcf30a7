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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gradcheck.h"
#include "latentsynth/nn/adam.h"
#include "latentsynth/nn/graph.h"
#include "latentsynth/nn/layers.h"
#include "oracles.h"

namespace latentsynth::nn {
namespace {

using Var = Graph::Var;

Parameter MakeParameter(const std::string& name, Matrix value) {
  Parameter p{name, std::move(value), {}};
  p.ZeroGrad();
  return p;
}

// Gradient of sum(op(a, b) .* r) for a fixed random r, checked entry-wise.
template <typename Op>
double CheckBinary(Op op, Matrix a0, Matrix b0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Parameter a = MakeParameter("a", std::move(a0));
  Parameter b = MakeParameter("b", std::move(b0));
  Matrix r;
  {
    Graph g;
    r = oracle::RandomMatrix(g.value(op(g, g.Param(a), g.Param(b))).rows(),
                             g.value(op(g, g.Param(a), g.Param(b))).cols(), rng);
  }
  std::vector<Parameter*> params{&a, &b};
  return oracle::CheckGradients(params, [&](Graph& g) {
           return g.Sum(g.Mul(op(g, g.Param(a), g.Param(b)), g.Constant(r)));
         }).worst;
}

template <typename Op>
double CheckUnary(Op op, Matrix a0, std::uint64_t seed) {
  return CheckBinary([&](Graph& g, Var a, Var) { return op(g, a); }, std::move(a0),
                     Matrix::Zero(1, 1), seed);
}

class GraphOpTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng{42};
  Matrix Rand(int r, int c, double s = 1.0) { return oracle::RandomMatrix(r, c, rng, s); }
};

TEST_F(GraphOpTest, MatMulT) {
  EXPECT_LT(CheckBinary([](Graph& g, Var a, Var b) { return g.MatMulT(a, b); }, Rand(4, 3),
                        Rand(5, 3), 1),
            1e-6);
}

TEST_F(GraphOpTest, AddBias) {
  EXPECT_LT(CheckBinary([](Graph& g, Var a, Var b) { return g.AddBias(a, b); }, Rand(4, 3),
                        Rand(3, 1), 2),
            1e-6);
}

TEST_F(GraphOpTest, ElementwiseBinary) {
  EXPECT_LT(CheckBinary([](Graph& g, Var a, Var b) { return g.Add(a, b); }, Rand(3, 3), Rand(3, 3), 3), 1e-6);
  EXPECT_LT(CheckBinary([](Graph& g, Var a, Var b) { return g.Sub(a, b); }, Rand(3, 3), Rand(3, 3), 4), 1e-6);
  EXPECT_LT(CheckBinary([](Graph& g, Var a, Var b) { return g.Mul(a, b); }, Rand(3, 3), Rand(3, 3), 5), 1e-6);
}

TEST_F(GraphOpTest, ElementwiseUnary) {
  EXPECT_LT(CheckUnary([](Graph& g, Var a) { return g.Scale(a, -2.5); }, Rand(3, 4), 6), 1e-6);
  EXPECT_LT(CheckUnary([](Graph& g, Var a) { return g.AddScalar(a, 0.7); }, Rand(3, 4), 7), 1e-6);
  EXPECT_LT(CheckUnary([](Graph& g, Var a) { return g.Tanh(a); }, Rand(3, 4), 8), 1e-6);
  EXPECT_LT(CheckUnary([](Graph& g, Var a) { return g.Sigmoid(a); }, Rand(3, 4), 9), 1e-6);
  EXPECT_LT(CheckUnary([](Graph& g, Var a) { return g.Exp(a); }, Rand(3, 4), 10), 1e-6);
  EXPECT_LT(CheckUnary([](Graph& g, Var a) { return g.Square(a); }, Rand(3, 4), 11), 1e-6);
  EXPECT_LT(CheckUnary([](Graph& g, Var a) { return g.Mean(a); }, Rand(3, 4), 12), 1e-6);
}

TEST_F(GraphOpTest, ClampPassesGradientOnlyInside) {
  Matrix a(1, 3);
  a << -5.0, 0.3, 5.0;
  Parameter p = MakeParameter("a", a);
  Graph g;
  const Var y = g.Sum(g.Clamp(g.Param(p), -1.0, 1.0));
  EXPECT_DOUBLE_EQ(g.scalar(y), -1.0 + 0.3 + 1.0);
  g.Backward(y);
  std::vector<Parameter*> ps{&p};
  g.AccumulateGradients(ps);
  EXPECT_EQ(p.grad, (Matrix(1, 3) << 0.0, 1.0, 0.0).finished());
  EXPECT_LT(CheckUnary([](Graph& gg, Var v) { return gg.Clamp(v, -10.0, 10.0); }, Rand(2, 2), 13), 1e-6);
}

TEST_F(GraphOpTest, SigmoidIsStableForLargeInputs) {
  Graph g;
  Matrix a(1, 2);
  a << -800.0, 800.0;
  const Matrix s = g.value(g.Sigmoid(g.Constant(a)));
  EXPECT_EQ(s(0, 0), 0.0);
  EXPECT_EQ(s(0, 1), 1.0);
}

TEST(GraphTest, NonFiniteValuesAreReported) {
  Graph g;
  Matrix big = Matrix::Constant(1, 1, 1000.0);
  EXPECT_THROW(g.Exp(g.Constant(big)), Error);
}

TEST(GraphTest, BackwardRunsOnce) {
  Parameter p = MakeParameter("p", Matrix::Ones(2, 2));
  Graph g;
  const Var y = g.Sum(g.Param(p));
  g.Backward(y);
  EXPECT_THROW(g.Backward(y), Error);
}

TEST(GraphTest, InferenceGraphHasNoBackward) {
  Graph g(Graph::Mode::kInference);
  const Var y = g.Sum(g.Constant(Matrix::Ones(2, 2)));
  EXPECT_THROW(g.Backward(y), Error);
}

TEST(GraphTest, ParamBindsOnceAndAccumulates) {
  Parameter p = MakeParameter("p", Matrix::Constant(1, 1, 3.0));
  Graph g;
  const Var a = g.Param(p);
  const Var b = g.Param(p);
  EXPECT_EQ(a.id, b.id);
  const Var y = g.Sum(g.Mul(a, b));
  g.Backward(y);
  std::vector<Parameter*> ps{&p};
  g.AccumulateGradients(ps);
  g.AccumulateGradients(ps);
  EXPECT_DOUBLE_EQ(p.grad(0, 0), 12.0);
}

TEST(GraphTest, ShapeErrorsThrow) {
  Graph g;
  const Var a = g.Constant(Matrix::Ones(2, 3));
  const Var b = g.Constant(Matrix::Ones(3, 2));
  EXPECT_THROW(g.Add(a, b), InvalidArgument);
  EXPECT_THROW(g.MatMulT(a, b), InvalidArgument);
  EXPECT_THROW(g.AddBias(a, g.Constant(Matrix::Ones(2, 1))), InvalidArgument);
  EXPECT_THROW(g.scalar(a), InvalidArgument);
  EXPECT_THROW(g.Backward(a), InvalidArgument);
}

TEST(ActivationTest, ParseRoundTrip) {
  for (Activation a : {Activation::kTanh, Activation::kSigmoid, Activation::kLinear}) {
    EXPECT_EQ(ParseActivation(ActivationName(a)), a);
  }
  EXPECT_THROW(ParseActivation("relu"), InvalidArgument);
}

TEST(DenseTest, GlorotBounds) {
  Rng rng(1);
  const Matrix w = GlorotUniform(64, 32, 32, 64, rng);
  const double limit = std::sqrt(6.0 / 96.0);
  EXPECT_LE(w.cwiseAbs().maxCoeff(), limit);
  EXPECT_GT(w.cwiseAbs().maxCoeff(), 0.9 * limit);
  EXPECT_NEAR(w.mean(), 0.0, 0.02);
}

TEST(DenseTest, ForwardMatchesFormula) {
  Rng rng(2);
  const DenseParams p = MakeDense("d", 5, 3, Activation::kTanh, rng);
  std::mt19937_64 r(3);
  const Matrix x = oracle::RandomMatrix(4, 5, r);
  const Matrix ref = ((x * p.weight.value.transpose()).rowwise() + p.bias.value.col(0).transpose())
                         .array()
                         .tanh()
                         .matrix();
  EXPECT_LT((DenseForward(p, x) - ref).cwiseAbs().maxCoeff(), 1e-15);
}

class DenseGradientTest : public ::testing::TestWithParam<Activation> {};

TEST_P(DenseGradientTest, TwoLayerStackMatchesFiniteDifferences) {
  Rng rng(4);
  DenseParams l1 = MakeDense("l1", 6, 4, GetParam(), rng);
  DenseParams l2 = MakeDense("l2", 4, 6, Activation::kLinear, rng);
  l1.bias.value = oracle::RandomMatrix(4, 1, rng, 0.1);
  std::mt19937_64 r(5);
  const Matrix x = oracle::RandomMatrix(3, 6, r);
  std::vector<Parameter*> params{&l1.weight, &l1.bias, &l2.weight, &l2.bias};
  const auto res = oracle::CheckGradients(params, [&](Graph& g) {
    const Var xv = g.Constant(x);
    const Var y = DenseForward(g, l2, DenseForward(g, l1, xv));
    return g.Mean(g.Square(g.Sub(y, xv)));
  });
  EXPECT_LT(res.worst, 1e-6) << res.worst_param;
}

INSTANTIATE_TEST_SUITE_P(Activations, DenseGradientTest,
                         ::testing::Values(Activation::kTanh, Activation::kSigmoid,
                                           Activation::kLinear));

TEST(LstmTest, ForwardMatchesScalarOracle) {
  Rng rng(6);
  LstmParams p = MakeLstm("l", 3, 4, rng);
  std::mt19937_64 r(7);
  for (Parameter* q : {&p.b_i, &p.b_f, &p.b_o, &p.b_c}) q->value = oracle::RandomMatrix(4, 1, r, 0.3);
  oracle::ScalarLstm ref{p.w_i.value, p.w_f.value, p.w_o.value, p.w_c.value,
                         p.u_i.value, p.u_f.value, p.u_o.value, p.u_c.value,
                         p.b_i.value.col(0), p.b_f.value.col(0), p.b_o.value.col(0),
                         p.b_c.value.col(0)};
  const Matrix xs = oracle::RandomMatrix(6, 3, r);
  const Matrix hs = LstmForward(p, xs);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(4), c = Eigen::VectorXd::Zero(4);
  for (int t = 0; t < 6; ++t) {
    ref.Step(xs.row(t).transpose(), &h, &c);
    EXPECT_LT((hs.row(t).transpose() - h).cwiseAbs().maxCoeff(), 1e-14) << t;
  }
}

TEST(LstmTest, FiveStepGradientMatchesFiniteDifferences) {
  Rng rng(8);
  LstmParams p = MakeLstm("l", 3, 4, rng);
  std::mt19937_64 r(9);
  std::vector<Matrix> xs;
  for (int t = 0; t < 5; ++t) xs.push_back(oracle::RandomMatrix(2, 3, r));
  const Matrix target = oracle::RandomMatrix(2, 4, r, 0.5);
  const auto res = oracle::CheckGradients(p.parameters(), [&](Graph& g) {
    std::vector<Var> in;
    for (const auto& x : xs) in.push_back(g.Constant(x));
    const auto hs = LstmForward(g, p, in);
    Var acc = g.Sum(g.Square(g.Sub(hs[0], g.Constant(target))));
    for (std::size_t t = 1; t < hs.size(); ++t) {
      acc = g.Add(acc, g.Sum(g.Square(g.Sub(hs[t], g.Constant(target)))));
    }
    return acc;
  });
  EXPECT_LT(res.worst, 1e-6) << res.worst_param;
}

TEST(LstmTest, ForgetBiasStartsAtOne) {
  Rng rng(1);
  const LstmParams p = MakeLstm("l", 2, 3, rng);
  EXPECT_EQ(p.b_f.value, Matrix::Ones(3, 1));
  EXPECT_EQ(p.b_i.value, Matrix::Zero(3, 1));
  Graph g;
  EXPECT_THROW(LstmForward(g, p, {}), InvalidArgument);
}

TEST(AdamTest, MatchesScalarOracle) {
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  Adam adam(cfg);
  Parameter p = MakeParameter("p", (Matrix(1, 3) << 1.0, -2.0, 0.5).finished());
  std::vector<oracle::ScalarAdam> ref(3, oracle::ScalarAdam{0.01});
  std::vector<double> values{1.0, -2.0, 0.5};
  std::vector<Parameter*> ps{&p};
  for (int step = 0; step < 50; ++step) {
    // Gradient of sum(x^3 - x).
    for (int j = 0; j < 3; ++j) p.grad(0, j) = 3.0 * p.value(0, j) * p.value(0, j) - 1.0;
    adam.Step(ps);
    for (int j = 0; j < 3; ++j) {
      values[j] = ref[j].Step(values[j], 3.0 * values[j] * values[j] - 1.0);
      EXPECT_NEAR(p.value(0, j), values[j], 1e-14) << step << "," << j;
    }
  }
  EXPECT_EQ(adam.step_count(), 50);
}

TEST(AdamTest, NonFiniteGradientLeavesParametersUntouched) {
  Adam adam;
  Parameter a = MakeParameter("a", Matrix::Ones(2, 2));
  Parameter b = MakeParameter("b", Matrix::Ones(2, 2));
  a.grad.setConstant(0.5);
  b.grad(1, 1) = std::nan("");
  std::vector<Parameter*> ps{&a, &b};
  EXPECT_THROW(adam.Step(ps), Error);
  EXPECT_EQ(a.value, Matrix::Ones(2, 2));
  EXPECT_EQ(adam.step_count(), 0);
}

TEST(AdamTest, MomentsFollowParameterNames) {
  Adam adam;
  Parameter a = MakeParameter("a", Matrix::Ones(1, 1));
  a.grad(0, 0) = 1.0;
  std::vector<Parameter*> ps{&a};
  adam.Step(ps);
  Parameter copy = a;
  copy.grad(0, 0) = 1.0;
  std::vector<Parameter*> cs{&copy};
  adam.Step(cs);
  oracle::ScalarAdam ref;
  double v = ref.Step(1.0, 1.0);
  v = ref.Step(v, 1.0);
  EXPECT_NEAR(copy.value(0, 0), v, 1e-15);
}

}  // namespace
}  // namespace latentsynth::nn
