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

#ifndef LATENTSYNTH_TESTS_SUPPORT_ORACLES_H_
#define LATENTSYNTH_TESTS_SUPPORT_ORACLES_H_

// Independent reference implementations used to check the library. Each is
// written from the textbook definition with plain loops and shares no code
// with the code under test.

#include <cmath>
#include <algorithm>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace latentsynth::oracle {

// X[k] = sum_n x[n] exp(-2 pi i k n / N) for k = 0..N/2.
inline std::vector<std::complex<double>> NaiveRealDft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi * double((k * t) % n) / double(n);
      acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

// Real inverse of a half spectrum of an even-length signal.
inline std::vector<double> NaiveInverseRealDft(const std::vector<std::complex<double>>& half,
                                               std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = half[0].real() + ((n % 2 == 0) ? half[n / 2].real() * ((t % 2) ? -1.0 : 1.0) : 0.0);
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) {
      const double angle = 2.0 * std::numbers::pi * double((k * t) % n) / double(n);
      acc += 2.0 * (half[k].real() * std::cos(angle) - half[k].imag() * std::sin(angle));
    }
    out[t] = acc / double(n);
  }
  return out;
}

// Periodic Hamming window from its definition.
inline std::vector<double> Hamming(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * double(i) / double(n));
  }
  return w;
}

// Cyclic Jacobi eigenvalue iteration for a symmetric matrix. Returns
// eigenvalues sorted descending and the matching eigenvectors as columns.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> JacobiEigen(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return {values, vectors};
}

// Fourth-order central difference of f along every entry of *x:
//   (-f(x+2h) + 8 f(x+h) - 8 f(x-h) + f(x-2h)) / 12h.
// f is evaluated with *x perturbed in place and restored afterwards.
inline Eigen::MatrixXd CentralDifference(Eigen::MatrixXd* x, const std::function<double()>& f,
                                         double h = 1e-3) {
  Eigen::MatrixXd g(x->rows(), x->cols());
  for (Eigen::Index i = 0; i < x->rows(); ++i) {
    for (Eigen::Index j = 0; j < x->cols(); ++j) {
      const double keep = (*x)(i, j);
      auto at = [&](double offset) {
        (*x)(i, j) = keep + offset;
        return f();
      };
      const double d = -at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h);
      (*x)(i, j) = keep;
      g(i, j) = d / (12.0 * h);
    }
  }
  return g;
}

// Worst entry of |a - b| / max(|a|, |b|, floor). The floor keeps entries
// whose true gradient is zero from dividing rounding noise by zero.
inline double GradientError(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& numeric,
                            double floor = 1e-6) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    const double a = analytic.data()[i], b = numeric.data()[i];
    const double denom = std::max({floor, std::abs(a), std::abs(b)});
    worst = std::max(worst, std::abs(a - b) / denom);
  }
  return worst;
}

// Adam on one scalar, straight from the update equations.
struct ScalarAdam {
  double lr = 1e-3, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double m = 0.0, v = 0.0;
  int t = 0;

  double Step(double param, double grad) {
    ++t;
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad * grad;
    const double m_hat = m / (1.0 - std::pow(b1, t));
    const double v_hat = v / (1.0 - std::pow(b2, t));
    return param - lr * m_hat / (std::sqrt(v_hat) + eps);
  }
};

// Monte-Carlo estimate of KL(N(mu, diag(exp(log_var))) || N(0, I)) as the
// sample mean of log q(z) - log p(z) over z drawn from q.
inline double MonteCarloKl(const Eigen::VectorXd& mu, const Eigen::VectorXd& log_var,
                           long samples, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const Eigen::VectorXd sd = (0.5 * log_var.array()).exp();
  double acc = 0.0;
  for (long s = 0; s < samples; ++s) {
    double log_ratio = 0.0;
    for (Eigen::Index d = 0; d < mu.size(); ++d) {
      const double eps = n(rng);
      const double z = mu(d) + sd(d) * eps;
      // log q - log p; the 2 pi terms cancel.
      log_ratio += -0.5 * log_var(d) - 0.5 * eps * eps + 0.5 * z * z;
    }
    acc += log_ratio;
  }
  return acc / double(samples);
}

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One LSTM step for a single sequence, gate by gate and entry by entry.
// Weights are (hidden x input) for W and (hidden x hidden) for U.
struct ScalarLstm {
  Eigen::MatrixXd wi, wf, wo, wc, ui, uf, uo, uc;
  Eigen::VectorXd bi, bf, bo, bc;

  void Step(const Eigen::VectorXd& x, Eigen::VectorXd* h, Eigen::VectorXd* c) const {
    const Eigen::Index n = bi.size();
    Eigen::VectorXd h_new(n), c_new(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      double zi = bi(j), zf = bf(j), zo = bo(j), zc = bc(j);
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        zi += wi(j, k) * x(k);
        zf += wf(j, k) * x(k);
        zo += wo(j, k) * x(k);
        zc += wc(j, k) * x(k);
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        zi += ui(j, k) * (*h)(k);
        zf += uf(j, k) * (*h)(k);
        zo += uo(j, k) * (*h)(k);
        zc += uc(j, k) * (*h)(k);
      }
      c_new(j) = Sigmoid(zf) * (*c)(j) + Sigmoid(zi) * std::tanh(zc);
      h_new(j) = Sigmoid(zo) * std::tanh(c_new(j));
    }
    *h = h_new;
    *c = c_new;
  }
};

inline Eigen::MatrixXd RandomMatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                                    double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

}  // namespace latentsynth::oracle

#endif  // LATENTSYNTH_TESTS_SUPPORT_ORACLES_H_
