// vocalrisk/stats/lda.hpp

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

// Two-group Fisher discriminant analysis.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vocalrisk/errors.hpp"
#include "vocalrisk/stats/distributions.hpp"
#include "vocalrisk/stats/ols.hpp"

namespace vocalrisk::stats {

enum class Priors { kEqual, kProportional };

inline const char* to_string(Priors p) { return p == Priors::kEqual ? "equal" : "proportional"; }

inline Priors parse_priors(const std::string& s) {
  if (s == "equal") return Priors::kEqual;
  if (s == "proportional") return Priors::kProportional;
  throw ValidationError("unknown priors '" + s + "' (expected equal or proportional)");
}

struct LdaOptions {
  Priors priors = Priors::kEqual;
  bool ridge = false;        // regularize a singular pooled covariance
  bool leave_one_out = true;
};

struct DiscriminantResult {
  std::vector<std::string> variables;
  Vector weights;                 // raw canonical coefficients
  Vector standardized_weights;    // weights scaled by pooled within-group SDs
  double constant = 0.0;          // score = weights . x + constant
  Vector structure;               // pooled within-group correlations with the score
  double eigenvalue = 0.0;
  double canonical_correlation = 0.0;
  double wilks_lambda = 1.0;
  double chi_square = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  double centroid_low = 0.0, centroid_high = 0.0;
  std::size_t n_low = 0, n_high = 0;
  double prior_low = 0.5, prior_high = 0.5;
  std::vector<int> predicted;     // resubstitution
  double resubstitution_accuracy = 0.0;
  std::optional<std::vector<int>> loo_predicted;
  std::optional<double> loo_accuracy;
  std::optional<double> ridge_epsilon;

  double score(const Vector& x) const { return weights.dot(x) + constant; }

  /// Group with the larger posterior on the single discriminant axis.
  int classify(const Vector& x) const { return classify_score(score(x)); }
  int classify_score(double s) const {
    const double d_high = s * centroid_high - 0.5 * centroid_high * centroid_high + std::log(prior_high);
    const double d_low = s * centroid_low - 0.5 * centroid_low * centroid_low + std::log(prior_low);
    return d_high > d_low ? 1 : 0;
  }
};

namespace detail {

struct LdaCore {
  Vector mean0, mean1, grand;
  Matrix sw;  // pooled within-group covariance, divisor n - 2
  Vector w;   // unit pooled-variance direction
  std::optional<double> ridge;
  std::size_t n0 = 0, n1 = 0;
};

inline LdaCore lda_core(const Matrix& x, const std::vector<int>& labels, bool ridge) {
  const Eigen::Index n = x.rows(), p = x.cols();
  if (static_cast<std::size_t>(n) != labels.size()) throw ValidationError("lda: label count does not match rows");
  if (p < 1) throw ValidationError("lda: need at least one variable");
  LdaCore c;
  c.mean0 = Vector::Zero(p);
  c.mean1 = Vector::Zero(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = labels[static_cast<std::size_t>(i)];
    if (g != 0 && g != 1) throw ValidationError("lda: labels must be 0 or 1");
    if (!x.row(i).allFinite()) throw ValidationError("lda: non-finite value in row " + std::to_string(i));
    if (g == 1) {
      c.mean1 += x.row(i).transpose();
      ++c.n1;
    } else {
      c.mean0 += x.row(i).transpose();
      ++c.n0;
    }
  }
  if (c.n0 < 2 || c.n1 < 2)
    throw DegenerateError("lda: each group needs at least 2 cases (low " + std::to_string(c.n0) + ", high " +
                          std::to_string(c.n1) + ")");
  c.grand = (c.mean0 + c.mean1) / static_cast<double>(n);
  c.mean0 /= static_cast<double>(c.n0);
  c.mean1 /= static_cast<double>(c.n1);
  Matrix centered(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    centered.row(i) = x.row(i) - (labels[static_cast<std::size_t>(i)] == 1 ? c.mean1 : c.mean0).transpose();
  c.sw = centered.transpose() * centered / static_cast<double>(n - 2);

  // singularity judged on the correlation scale so column units do not matter
  Matrix sw = c.sw;
  bool singular = !(sw.diagonal().minCoeff() > 0.0);
  if (!singular) {
    const Vector inv_sd = sw.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::LDLT<Matrix> corr(inv_sd.asDiagonal() * sw * inv_sd.asDiagonal());
    singular = corr.info() != Eigen::Success || !(corr.vectorD().minCoeff() > 1e-12);
  }
  Eigen::LDLT<Matrix> ldlt(sw);
  if (singular) {
    if (!ridge) throw DegenerateError("lda: pooled within-group covariance is singular");
    const double eps = 1e-8 * std::max(sw.trace(), 1e-300) / static_cast<double>(p);
    sw.diagonal().array() += eps;
    ldlt.compute(sw);
    c.ridge = eps;
  }
  const Vector d = c.mean1 - c.mean0;
  Vector raw = ldlt.solve(d);
  const double q = raw.dot(sw * raw);
  if (!(q > 0.0)) throw DegenerateError("lda: group means coincide; no discriminant direction");
  c.w = raw / std::sqrt(q);
  return c;
}

}  // namespace detail

inline DiscriminantResult fit_lda(const Matrix& x, const std::vector<int>& labels, const LdaOptions& opt = {},
                                  std::vector<std::string> variables = {}) {
  const detail::LdaCore core = detail::lda_core(x, labels, opt.ridge);
  const Eigen::Index n = x.rows(), p = x.cols();
  DiscriminantResult r;
  if (variables.empty())
    for (Eigen::Index j = 0; j < p; ++j) variables.push_back("x" + std::to_string(j + 1));
  r.variables = std::move(variables);
  r.ridge_epsilon = core.ridge;
  r.n_low = core.n0;
  r.n_high = core.n1;
  r.weights = core.w;
  r.constant = -core.w.dot(core.grand);
  r.standardized_weights = core.w.array() * core.sw.diagonal().array().sqrt();
  r.centroid_low = core.w.dot(core.mean0 - core.grand);
  r.centroid_high = core.w.dot(core.mean1 - core.grand);

  const double ss_within = static_cast<double>(n - 2) * core.w.dot(core.sw * core.w);
  const double ss_between = static_cast<double>(core.n0) * r.centroid_low * r.centroid_low +
                            static_cast<double>(core.n1) * r.centroid_high * r.centroid_high;
  r.eigenvalue = ss_between / ss_within;
  r.canonical_correlation = std::sqrt(r.eigenvalue / (1.0 + r.eigenvalue));
  r.wilks_lambda = 1.0 / (1.0 + r.eigenvalue);
  r.df = static_cast<double>(p);
  r.chi_square = -(static_cast<double>(n) - 1.0 - (static_cast<double>(p) + 2.0) / 2.0) * std::log(r.wilks_lambda);
  r.p_value = chi2_sf(std::max(0.0, r.chi_square), r.df);

  const Vector swv = core.sw * core.w;
  const double score_var = core.w.dot(swv);
  r.structure.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double vj = core.sw(j, j);
    r.structure(j) = vj > 0.0 ? std::clamp(swv(j) / std::sqrt(vj * score_var), -1.0, 1.0) : 0.0;
  }

  if (opt.priors == Priors::kProportional) {
    r.prior_low = static_cast<double>(core.n0) / static_cast<double>(n);
    r.prior_high = static_cast<double>(core.n1) / static_cast<double>(n);
  }

  std::size_t correct = 0;
  r.predicted.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = r.classify(x.row(i).transpose());
    r.predicted[static_cast<std::size_t>(i)] = g;
    correct += g == labels[static_cast<std::size_t>(i)];
  }
  r.resubstitution_accuracy = static_cast<double>(correct) / static_cast<double>(n);

  if (opt.leave_one_out) {
    std::vector<int> loo(static_cast<std::size_t>(n));
    std::size_t hits = 0;
    Matrix xs(n - 1, p);
    std::vector<int> ls(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0, m = 0; k < n; ++k) {
        if (k == i) continue;
        xs.row(m) = x.row(k);
        ls[static_cast<std::size_t>(m++)] = labels[static_cast<std::size_t>(k)];
      }
      const detail::LdaCore c = detail::lda_core(xs, ls, opt.ridge);
      DiscriminantResult fold;
      fold.weights = c.w;
      fold.constant = -c.w.dot(c.grand);
      fold.centroid_low = c.w.dot(c.mean0 - c.grand);
      fold.centroid_high = c.w.dot(c.mean1 - c.grand);
      if (opt.priors == Priors::kProportional) {
        fold.prior_low = static_cast<double>(c.n0) / static_cast<double>(n - 1);
        fold.prior_high = static_cast<double>(c.n1) / static_cast<double>(n - 1);
      }
      const int g = fold.classify(x.row(i).transpose());
      loo[static_cast<std::size_t>(i)] = g;
      hits += g == labels[static_cast<std::size_t>(i)];
    }
    r.loo_predicted = std::move(loo);
    r.loo_accuracy = static_cast<double>(hits) / static_cast<double>(n);
  }
  return r;
}

}  // namespace vocalrisk::stats
