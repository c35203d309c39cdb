// vocalrisk/stats/svm.hpp

// Copyright 2026  The vocalrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// One-vs-rest linear SVM. Each binary problem minimizes
//   lambda/2 |w|^2 + 1/n sum_i max(0, 1 - y_i (w.x_i + b)),  lambda = 1/(C n),
// which has the same minimizer as 1/2 |w|^2 + C sum hinge. Full-batch
// subgradient steps 1/(lambda t) with iterate averaging over the second half;
// no randomness, so training is reproducible bit for bit.

#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "vocalrisk/errors.hpp"
#include "vocalrisk/stats/ols.hpp"

namespace vocalrisk::stats {

struct SvmOptions {
  double c = 0.1;          // misclassification cost
  int iterations = 2000;   // fixed budget
};

struct LinearSvmModel {
  std::vector<int> classes;  // sorted class ids
  Matrix weights;            // classes x features, on standardized inputs
  Vector bias;
  Vector mean, scale;        // training standardization
  double c = 0.1;
  int iterations = 0;

  Vector decision(const Vector& x) const {
    const Vector z = ((x - mean).array() / scale.array()).matrix();
    return weights * z + bias;
  }
  int predict(const Vector& x) const {
    const Vector d = decision(x);
    Eigen::Index k = 0;
    d.maxCoeff(&k);  // first maximum on ties
    return classes[static_cast<std::size_t>(k)];
  }
};

inline LinearSvmModel train_linear_svm(const Matrix& x, const std::vector<int>& labels, const SvmOptions& opt = {}) {
  const Eigen::Index n = x.rows(), p = x.cols();
  if (static_cast<std::size_t>(n) != labels.size()) throw ValidationError("svm: label count does not match rows");
  if (!(opt.c > 0.0)) throw ValidationError("svm: C must be positive");
  if (opt.iterations < 1) throw ValidationError("svm: iteration budget must be positive");
  if (!x.allFinite()) throw ValidationError("svm: non-finite feature value");
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw ValidationError("svm: need at least two classes");

  LinearSvmModel m;
  m.classes.assign(distinct.begin(), distinct.end());
  m.c = opt.c;
  m.iterations = opt.iterations;
  m.mean = x.colwise().mean().transpose();
  m.scale.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sd = std::sqrt((x.col(j).array() - m.mean(j)).square().sum() / static_cast<double>(n));
    m.scale(j) = sd > 0.0 ? sd : 1.0;
  }
  Matrix z(n, p);
  for (Eigen::Index i = 0; i < n; ++i) z.row(i) = (x.row(i).transpose() - m.mean).cwiseQuotient(m.scale).transpose();

  const auto k = static_cast<Eigen::Index>(m.classes.size());
  m.weights = Matrix::Zero(k, p);
  m.bias = Vector::Zero(k);
  const double lambda = 1.0 / (opt.c * static_cast<double>(n));
  const int average_from = opt.iterations / 2 + 1;

  for (Eigen::Index c = 0; c < k; ++c) {
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)] == m.classes[static_cast<std::size_t>(c)] ? 1.0 : -1.0;
    Vector w = Vector::Zero(p), w_avg = Vector::Zero(p);
    double b = 0.0, b_avg = 0.0;
    int averaged = 0;
    for (int t = 1; t <= opt.iterations; ++t) {
      const Vector margin = y.cwiseProduct(z * w + Vector::Constant(n, b));
      Vector gw = lambda * w;
      double gb = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (margin(i) < 1.0) {
          gw -= y(i) / static_cast<double>(n) * z.row(i).transpose();
          gb -= y(i) / static_cast<double>(n);
        }
      }
      const double eta = 1.0 / (lambda * t);
      w -= eta * gw;
      b -= eta * gb;
      // the optimum lies in the ball of radius 1/sqrt(lambda)
      const double norm = w.norm();
      const double radius = 1.0 / std::sqrt(lambda);
      if (norm > radius) w *= radius / norm;
      if (t >= average_from) {
        w_avg += w;
        b_avg += b;
        ++averaged;
      }
    }
    m.weights.row(c) = (w_avg / averaged).transpose();
    m.bias(c) = b_avg / averaged;
  }
  return m;
}

inline std::vector<int> predict(const LinearSvmModel& model, const Matrix& x) {
  if (x.cols() != model.mean.size()) throw ValidationError("svm: feature count does not match the model");
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = model.predict(x.row(i).transpose());
  return out;
}

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) throw ValidationError("accuracy: size mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace vocalrisk::stats
