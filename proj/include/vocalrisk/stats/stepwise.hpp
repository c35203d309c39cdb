// vocalrisk/stats/stepwise.hpp

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

// Stepwise two-group discriminant selection driven by partial F statistics
// derived from Wilks' lambda of the within and total SSCP matrices.

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

struct StepwiseOptions {
  double p_enter = 0.05;
  double p_remove = 0.10;
};

struct StepEvent {
  int step = 0;
  bool entered = true;  // false = removed
  std::string variable;
  double f = 0.0;
  double df1 = 1.0, df2 = 0.0;
  double significance = 1.0;
  double wilks_lambda = 1.0;  // of the set after the event
};

struct RetainedVariable {
  std::string variable;
  double f_to_remove = 0.0;
  double significance = 1.0;  // "sig. of F to remove"
};

struct StepwiseTrace {
  std::vector<StepEvent> events;
  std::vector<RetainedVariable> final_set;
  std::vector<std::string> candidates;
  std::size_t n_cases = 0;
  double wilks_lambda = 1.0;
  StepwiseOptions options;
};

namespace detail {

class WilksCalculator {
 public:
  WilksCalculator(const Matrix& x, const std::vector<int>& labels) {
    const Eigen::Index n = x.rows(), p = x.cols();
    Vector m0 = Vector::Zero(p), m1 = Vector::Zero(p);
    double n0 = 0, n1 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (labels[static_cast<std::size_t>(i)] == 1) {
        m1 += x.row(i).transpose();
        ++n1;
      } else {
        m0 += x.row(i).transpose();
        ++n0;
      }
    }
    const Vector grand = (m0 + m1) / static_cast<double>(n);
    m0 /= n0;
    m1 /= n1;
    Matrix cw(n, p), ct(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      cw.row(i) = x.row(i) - (labels[static_cast<std::size_t>(i)] == 1 ? m1 : m0).transpose();
      ct.row(i) = x.row(i) - grand.transpose();
    }
    w_ = cw.transpose() * cw;
    t_ = ct.transpose() * ct;
  }

  /// Lambda of a subset; nullopt when the within SSCP of the subset is
  /// (numerically) singular, i.e. a variable fails the tolerance check.
  std::optional<double> lambda(const std::vector<Eigen::Index>& set) const {
    if (set.empty()) return 1.0;
    const auto k = static_cast<Eigen::Index>(set.size());
    Matrix w(k, k), t(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) {
        w(a, b) = w_(set[a], set[b]);
        t(a, b) = t_(set[a], set[b]);
      }
    for (Eigen::Index a = 0; a < k; ++a)
      if (!(w(a, a) > 0.0)) return std::nullopt;
    // correlation scaling keeps the tolerance test unit free
    const Vector s = w.diagonal().cwiseSqrt().cwiseInverse();
    const Matrix ws = s.asDiagonal() * w * s.asDiagonal();
    const Matrix ts = s.asDiagonal() * t * s.asDiagonal();
    const Eigen::LDLT<Matrix> lw(ws), lt(ts);
    if (lw.info() != Eigen::Success || !(lw.vectorD().minCoeff() > 1e-10)) return std::nullopt;
    double log_ratio = 0.0;
    for (Eigen::Index a = 0; a < k; ++a) log_ratio += std::log(lw.vectorD()(a)) - std::log(lt.vectorD()(a));
    return std::exp(log_ratio);
  }

 private:
  Matrix w_, t_;
};

}  // namespace detail

/// Forward entry of the variable with the smallest F-to-enter significance
/// (at most p_enter), followed after every entry by removal of variables whose
/// F-to-remove significance exceeds p_remove.
inline StepwiseTrace stepwise_lda(const Matrix& x, const std::vector<int>& labels, const StepwiseOptions& opt = {},
                                  std::vector<std::string> names = {}) {
  const Eigen::Index n = x.rows(), v = x.cols();
  if (v < 1) throw ValidationError("stepwise: need at least one candidate variable");
  if (static_cast<std::size_t>(n) != labels.size()) throw ValidationError("stepwise: label count does not match rows");
  if (!(opt.p_enter > 0.0 && opt.p_enter <= opt.p_remove && opt.p_remove < 1.0))
    throw ValidationError("stepwise: require 0 < p_enter <= p_remove < 1");
  std::size_t n0 = 0, n1 = 0;
  for (int g : labels) {
    if (g != 0 && g != 1) throw ValidationError("stepwise: labels must be 0 or 1");
    (g ? n1 : n0)++;
  }
  if (n0 < 2 || n1 < 2) throw DegenerateError("stepwise: each group needs at least 2 cases");
  if (!x.allFinite()) throw ValidationError("stepwise: non-finite value in candidates");
  if (names.empty())
    for (Eigen::Index j = 0; j < v; ++j) names.push_back("x" + std::to_string(j + 1));

  StepwiseTrace trace;
  trace.candidates = names;
  trace.n_cases = static_cast<std::size_t>(n);
  trace.options = opt;
  const detail::WilksCalculator calc(x, labels);
  const double g = 2.0, nd = static_cast<double>(n);
  std::vector<Eigen::Index> in;
  double lambda_in = 1.0;

  auto remove_stats = [&](Eigen::Index var, double& f, double& df2, double& sig) {
    std::vector<Eigen::Index> without;
    for (Eigen::Index j : in)
      if (j != var) without.push_back(j);
    const double p = static_cast<double>(in.size());
    const double l_without = *calc.lambda(without);
    df2 = nd - g - p + 1.0;
    f = df2 / (g - 1.0) * (l_without / lambda_in - 1.0);
    sig = f_sf(std::max(0.0, f), 1.0, df2);
  };

  const int max_steps = static_cast<int>(4 * v + 4);
  int step = 0;
  while (step < max_steps) {
    // entry
    const double p = static_cast<double>(in.size());
    const double df2 = nd - g - p;
    if (df2 < 1.0) break;
    Eigen::Index best = -1;
    double best_f = -1.0, best_lambda = 1.0;
    for (Eigen::Index j = 0; j < v; ++j) {
      if (std::find(in.begin(), in.end(), j) != in.end()) continue;
      std::vector<Eigen::Index> with = in;
      with.push_back(j);
      const auto l = calc.lambda(with);
      if (!l) continue;
      const double f = df2 / (g - 1.0) * (lambda_in / *l - 1.0);
      if (f > best_f) {
        best_f = f;
        best = j;
        best_lambda = *l;
      }
    }
    if (best < 0) break;
    const double sig = f_sf(std::max(0.0, best_f), 1.0, df2);
    if (sig > opt.p_enter) break;
    in.push_back(best);
    lambda_in = best_lambda;
    trace.events.push_back({++step, true, names[static_cast<std::size_t>(best)], best_f, 1.0, df2, sig, lambda_in});

    // removal
    while (in.size() > 1 && step < max_steps) {
      Eigen::Index worst = -1;
      double worst_sig = -1.0, worst_f = 0.0, worst_df2 = 0.0;
      for (Eigen::Index j : in) {
        double f, d2, s;
        remove_stats(j, f, d2, s);
        if (s > worst_sig) {
          worst_sig = s;
          worst = j;
          worst_f = f;
          worst_df2 = d2;
        }
      }
      if (worst_sig <= opt.p_remove) break;
      in.erase(std::find(in.begin(), in.end(), worst));
      lambda_in = *calc.lambda(in);
      trace.events.push_back(
          {++step, false, names[static_cast<std::size_t>(worst)], worst_f, 1.0, worst_df2, worst_sig, lambda_in});
    }
  }

  trace.wilks_lambda = lambda_in;
  for (Eigen::Index j : in) {
    RetainedVariable rv;
    rv.variable = names[static_cast<std::size_t>(j)];
    double d2;
    remove_stats(j, rv.f_to_remove, d2, rv.significance);
    trace.final_set.push_back(rv);
  }
  return trace;
}

}  // namespace vocalrisk::stats
