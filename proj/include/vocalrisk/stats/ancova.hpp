// vocalrisk/stats/ancova.hpp

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

// Two-group analysis of covariance by model comparison, with adjusted means
// and partial eta squared; optional omnibus MANCOVA and a Benjamini-Hochberg
// adjustment for the per-feature p values.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "vocalrisk/errors.hpp"
#include "vocalrisk/stats/distributions.hpp"
#include "vocalrisk/stats/ols.hpp"

namespace vocalrisk::stats {

struct CategoricalCovariate {
  std::string name;
  std::vector<std::string> values;  // one per case
};

struct ContinuousCovariate {
  std::string name;
  std::vector<double> values;
};

/// Grouping and covariates for a set of cases. group[i] is 0 (low) or 1 (high).
struct CovariateTable {
  std::vector<int> group;
  std::vector<CategoricalCovariate> categorical;
  std::vector<ContinuousCovariate> continuous;

  std::size_t size() const { return group.size(); }

  /// Subset of cases, in the given order.
  CovariateTable subset(const std::vector<std::size_t>& rows) const {
    CovariateTable out;
    for (std::size_t r : rows) out.group.push_back(group[r]);
    for (const auto& c : categorical) {
      CategoricalCovariate s{c.name, {}};
      for (std::size_t r : rows) s.values.push_back(c.values[r]);
      out.categorical.push_back(std::move(s));
    }
    for (const auto& c : continuous) {
      ContinuousCovariate s{c.name, {}};
      for (std::size_t r : rows) s.values.push_back(c.values[r]);
      out.continuous.push_back(std::move(s));
    }
    return out;
  }
};

/// Column 0 intercept, column 1 group indicator, then reference-coded
/// dummies (sorted levels, first dropped) and continuous covariates.
inline DesignMatrix build_design(const CovariateTable& table) {
  const std::size_t n = table.size();
  for (const auto& c : table.categorical)
    if (c.values.size() != n) throw ValidationError("covariate '" + c.name + "' has wrong length");
  for (const auto& c : table.continuous) {
    if (c.values.size() != n) throw ValidationError("covariate '" + c.name + "' has wrong length");
    for (double v : c.values)
      if (!std::isfinite(v)) throw ValidationError("covariate '" + c.name + "' has a missing value");
  }
  std::vector<std::vector<double>> cols;
  DesignMatrix d;
  cols.emplace_back(n, 1.0);
  d.columns.push_back("intercept");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table.group[i] != 0 && table.group[i] != 1) throw ValidationError("group indicator must be 0 or 1");
    g[i] = table.group[i];
  }
  cols.push_back(std::move(g));
  d.columns.push_back("group");
  for (const auto& c : table.categorical) {
    std::vector<std::string> levels(c.values.begin(), c.values.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (std::size_t l = 1; l < levels.size(); ++l) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = c.values[i] == levels[l] ? 1.0 : 0.0;
      cols.push_back(std::move(col));
      d.columns.push_back(c.name + "=" + levels[l]);
    }
  }
  for (const auto& c : table.continuous) {
    cols.push_back(c.values);
    d.columns.push_back(c.name);
  }
  d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = cols[c][i];
  return d;
}

inline constexpr Eigen::Index kGroupColumn = 1;

struct AncovaRow {
  std::string feature;
  double adjusted_mean_low = 0.0;
  double adjusted_mean_high = 0.0;
  double f = 0.0;
  double df1 = 1.0;
  double df2 = 0.0;
  double p = 1.0;
  double partial_eta2 = 0.0;
  std::size_t n_low = 0, n_high = 0;
  std::optional<double> p_bh;  // supplementary, filled by adjust_bh
};

struct AncovaResult {
  std::vector<AncovaRow> rows;
  std::optional<double> mancova_wilks;  // omnibus test when requested
  std::optional<double> mancova_p;
  std::vector<std::string> warnings;
};

/// One feature: F for the group effect comparing the full model against the
/// model without the group column.
inline AncovaRow ancova_feature(const CovariateTable& table, const std::vector<double>& y,
                                std::string feature_name = {}) {
  const std::size_t n = table.size();
  if (y.size() != n) throw ValidationError("ancova: feature '" + feature_name + "' length mismatch");
  AncovaRow row;
  row.feature = std::move(feature_name);
  for (int g : table.group) (g == 1 ? row.n_high : row.n_low)++;
  if (row.n_low < 2 || row.n_high < 2)
    throw DegenerateError("ancova: each group needs at least 2 cases (low " + std::to_string(row.n_low) +
                          ", high " + std::to_string(row.n_high) + ")");
  Vector yv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(y[i])) throw ValidationError("ancova: feature '" + row.feature + "' has a missing value");
    yv(static_cast<Eigen::Index>(i)) = y[i];
  }
  const double ymean = yv.mean();
  if ((yv.array() - ymean).abs().maxCoeff() <= 1e-12 * std::max(1.0, std::abs(ymean)))
    throw DegenerateError("ancova: feature '" + row.feature + "' is constant");

  const DesignMatrix full = build_design(table);
  const OlsFit f_full = fit_ols(full, yv);
  const OlsFit f_red = fit_ols(full.drop(kGroupColumn), yv);
  const double tss = (yv.array() - ymean).square().sum();
  if (!(f_full.rss > 1e-20 * tss)) throw DegenerateError("ancova: zero residual variance for '" + row.feature + "'");
  const double ss_group = std::max(0.0, f_red.rss - f_full.rss);
  row.df2 = static_cast<double>(f_full.df_residual);
  row.f = ss_group / (f_full.rss / row.df2);
  row.p = f_sf(row.f, row.df1, row.df2);
  row.partial_eta2 = ss_group / (ss_group + f_full.rss);

  // adjusted means: predictions with covariates at their sample means
  Vector xbar = full.x.colwise().mean().transpose();
  xbar(kGroupColumn) = 0.0;
  row.adjusted_mean_low = xbar.dot(f_full.coefficients);
  xbar(kGroupColumn) = 1.0;
  row.adjusted_mean_high = xbar.dot(f_full.coefficients);
  return row;
}

/// Benjamini-Hochberg step-up adjusted p values (same order as input).
inline std::vector<double> benjamini_hochberg(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> adj(m);
  double running = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const std::size_t i = order[k];
    running = std::min(running, p[i] * static_cast<double>(m) / static_cast<double>(k + 1));
    adj[i] = std::min(1.0, running);
  }
  return adj;
}

inline void adjust_bh(AncovaResult& result) {
  std::vector<double> p;
  for (const auto& r : result.rows) p.push_back(r.p);
  const auto adj = benjamini_hochberg(p);
  for (std::size_t i = 0; i < adj.size(); ++i) result.rows[i].p_bh = adj[i];
}

struct MancovaResult {
  double wilks = 1.0;
  double f = 0.0;
  double df1 = 0.0, df2 = 0.0;
  double p = 1.0;
};

/// Omnibus group test over several responses (columns of y). With a single
/// hypothesis degree of freedom Wilks' lambda has an exact F transform.
inline MancovaResult mancova(const CovariateTable& table, const Matrix& y) {
  const DesignMatrix full = build_design(table);
  const DesignMatrix red = full.drop(kGroupColumn);
  const Eigen::Index k = y.cols();
  if (y.rows() != full.rows()) throw ValidationError("mancova: response rows do not match cases");
  Matrix e_full(y.rows(), k), e_red(y.rows(), k);
  Eigen::ColPivHouseholderQR<Matrix> qf(full.x), qr(red.x);
  for (Eigen::Index j = 0; j < k; ++j) {
    e_full.col(j) = y.col(j) - full.x * qf.solve(y.col(j));
    e_red.col(j) = y.col(j) - red.x * qr.solve(y.col(j));
  }
  const Matrix E = e_full.transpose() * e_full;
  const Matrix T = e_red.transpose() * e_red;
  const double df_e = static_cast<double>(full.rows() - full.cols());
  if (df_e - static_cast<double>(k) + 1.0 <= 0.0)
    throw DegenerateError("mancova: too few cases for " + std::to_string(k) + " responses");
  const double det_t = T.determinant();
  if (!(det_t > 0.0)) throw DegenerateError("mancova: singular response covariance");
  MancovaResult r;
  r.wilks = std::clamp(E.determinant() / det_t, 0.0, 1.0);
  r.df1 = static_cast<double>(k);
  r.df2 = df_e - static_cast<double>(k) + 1.0;
  r.f = r.wilks > 0.0 ? (1.0 - r.wilks) / r.wilks * r.df2 / r.df1 : std::numeric_limits<double>::infinity();
  r.p = f_sf(r.f, r.df1, r.df2);
  return r;
}

}  // namespace vocalrisk::stats
