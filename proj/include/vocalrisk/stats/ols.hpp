// vocalrisk/stats/ols.hpp

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

#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vocalrisk/errors.hpp"

namespace vocalrisk::stats {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Cases by columns, with column names for diagnostics.
struct DesignMatrix {
  Matrix x;
  std::vector<std::string> columns;

  Eigen::Index rows() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }

  /// Copy without one column.
  DesignMatrix drop(Eigen::Index column) const {
    DesignMatrix out;
    out.x.resize(x.rows(), x.cols() - 1);
    for (Eigen::Index c = 0, k = 0; c < x.cols(); ++c) {
      if (c == column) continue;
      out.x.col(k++) = x.col(c);
      out.columns.push_back(columns[static_cast<std::size_t>(c)]);
    }
    return out;
  }
};

struct OlsFit {
  Vector coefficients;
  double rss = 0.0;
  Eigen::Index df_residual = 0;
};

/// Least squares through a column-pivoted Householder QR. Throws
/// DegenerateError listing the columns that are linear combinations of the
/// others.
inline OlsFit fit_ols(const DesignMatrix& design, const Vector& y) {
  const Eigen::Index n = design.rows(), p = design.cols();
  if (y.size() != n) throw ValidationError("fit_ols: response length does not match the design");
  if (n <= p)
    throw DegenerateError("fit_ols: need more cases (" + std::to_string(n) + ") than columns (" +
                          std::to_string(p) + ")");
  Eigen::ColPivHouseholderQR<Matrix> qr(design.x);
  qr.setThreshold(1e-10);  // relative to the largest pivot
  if (qr.rank() < p) {
    std::set<Eigen::Index> independent;
    for (Eigen::Index k = 0; k < qr.rank(); ++k) independent.insert(qr.colsPermutation().indices()(k));
    std::string names;
    for (Eigen::Index c = 0; c < p; ++c) {
      if (independent.count(c)) continue;
      if (!names.empty()) names += ", ";
      names += design.columns[static_cast<std::size_t>(c)];
    }
    throw DegenerateError("design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                          " of " + std::to_string(p) + "); collinear column(s): " + names);
  }
  OlsFit fit;
  fit.coefficients = qr.solve(y);
  fit.rss = (y - design.x * fit.coefficients).squaredNorm();
  fit.df_residual = n - p;
  return fit;
}

}  // namespace vocalrisk::stats
