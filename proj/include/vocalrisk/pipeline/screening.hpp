// vocalrisk/pipeline/screening.hpp

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

// Screening chain over a cohort: covariate-adjusted group comparison of each
// acoustic feature, a discriminant analysis on the features that differ, and
// stepwise selection among the emotion intensities.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vocalrisk/errors.hpp"
#include "vocalrisk/features.hpp"
#include "vocalrisk/pipeline/cohort.hpp"
#include "vocalrisk/stats/ancova.hpp"
#include "vocalrisk/stats/lda.hpp"
#include "vocalrisk/stats/stepwise.hpp"

namespace vocalrisk {

inline constexpr std::string_view kDisclaimer =
    "Screening research only. Not a diagnostic instrument; do not use for clinical decisions.";

struct ScreeningConfig {
  std::vector<Feature> features{kAcousticFeatures.begin(), kAcousticFeatures.end()};
  double alpha = 0.05;  // ANCOVA threshold for entering the discriminant analysis
  stats::LdaOptions lda;
  stats::StepwiseOptions stepwise;
  bool mancova = false;
};

struct AnalysisReport {
  std::size_t n_low = 0, n_high = 0;
  stats::AncovaResult ancova;
  std::vector<std::string> discriminant_variables;
  std::optional<stats::DiscriminantResult> discriminant;
  std::optional<stats::StepwiseTrace> stepwise;
  ScreeningConfig config;
  std::vector<std::string> warnings;
};

inline stats::CovariateTable covariates_for(const CohortTable& cohort, const std::vector<std::size_t>& rows) {
  stats::CovariateTable t;
  t.categorical = {{"gender", {}}, {"country", {}}};
  t.continuous = {{"gad7", {}}, {"wemwbs", {}}};
  for (std::size_t r : rows) {
    const CohortRow& row = cohort.rows[r];
    t.group.push_back(row.label == RiskLabel::kHigh ? 1 : 0);
    t.categorical[0].values.push_back(row.gender);
    t.categorical[1].values.push_back(row.country);
    t.continuous[0].values.push_back(row.gad7);
    t.continuous[1].values.push_back(row.wemwbs);
  }
  return t;
}

inline AnalysisReport run_screening(const CohortTable& cohort, const ScreeningConfig& cfg = {}) {
  AnalysisReport report;
  report.config = cfg;
  report.warnings = cohort.warnings;
  report.n_low = cohort.count(RiskLabel::kLow);
  report.n_high = cohort.count(RiskLabel::kHigh);
  if (report.n_low < 2 || report.n_high < 2)
    throw DegenerateError("screening needs at least 2 participants per risk group (low " +
                          std::to_string(report.n_low) + ", high " + std::to_string(report.n_high) + ")");

  // covariate-adjusted comparison, feature by feature
  for (Feature f : cfg.features) {
    const std::string name(feature_name(f));
    std::vector<std::size_t> rows;
    std::vector<double> y;
    for (std::size_t r = 0; r < cohort.rows.size(); ++r)
      if (const auto& v = cohort.rows[r].features[f]) {
        rows.push_back(r);
        y.push_back(*v);
      }
    if (rows.size() < cohort.rows.size())
      report.warnings.push_back(name + ": " + std::to_string(cohort.rows.size() - rows.size()) +
                                " participant(s) without a value excluded");
    try {
      report.ancova.rows.push_back(stats::ancova_feature(covariates_for(cohort, rows), y, name));
    } catch (const DegenerateError& e) {
      report.warnings.push_back(name + " skipped: " + e.what());
    }
  }
  stats::adjust_bh(report.ancova);

  if (cfg.mancova && !report.ancova.rows.empty()) {
    std::vector<std::size_t> rows;
    std::vector<Feature> used;
    for (const auto& a : report.ancova.rows) used.push_back(*feature_from_name(a.feature));
    for (std::size_t r = 0; r < cohort.rows.size(); ++r) {
      bool complete = true;
      for (Feature f : used) complete = complete && cohort.rows[r].features.has(f);
      if (complete) rows.push_back(r);
    }
    stats::Matrix y(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(used.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < used.size(); ++j)
        y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *cohort.rows[rows[i]].features[used[j]];
    try {
      const auto m = stats::mancova(covariates_for(cohort, rows), y);
      report.ancova.mancova_wilks = m.wilks;
      report.ancova.mancova_p = m.p;
    } catch (const DegenerateError& e) {
      report.warnings.push_back(std::string("omnibus test skipped: ") + e.what());
    }
  }

  // discriminant analysis on the significant features (complete cases)
  std::vector<Feature> selected;
  for (const auto& a : report.ancova.rows)
    if (a.p <= cfg.alpha) selected.push_back(*feature_from_name(a.feature));
  if (selected.empty()) {
    report.warnings.push_back("no feature reached p <= " + std::to_string(cfg.alpha) +
                              "; discriminant analysis not run");
  } else {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < cohort.rows.size(); ++r) {
      bool complete = true;
      for (Feature f : selected) complete = complete && cohort.rows[r].features.has(f);
      if (complete) rows.push_back(r);
    }
    stats::Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(selected.size()));
    std::vector<int> labels;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      labels.push_back(cohort.rows[rows[i]].label == RiskLabel::kHigh ? 1 : 0);
      for (std::size_t j = 0; j < selected.size(); ++j)
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *cohort.rows[rows[i]].features[selected[j]];
    }
    for (Feature f : selected) report.discriminant_variables.emplace_back(feature_name(f));
    try {
      report.discriminant = stats::fit_lda(x, labels, cfg.lda, report.discriminant_variables);
      if (report.discriminant->ridge_epsilon)
        report.warnings.push_back("pooled covariance singular; ridge applied");
    } catch (const DegenerateError& e) {
      report.warnings.push_back(std::string("discriminant analysis failed: ") + e.what());
    }
  }

  // stepwise selection over the emotion intensities (complete cases only)
  {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < cohort.rows.size(); ++r) {
      bool complete = true;
      for (const auto& v : cohort.rows[r].emotion_intensities) complete = complete && v.has_value();
      if (complete) rows.push_back(r);
    }
    stats::Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kEmotionCount));
    std::vector<int> labels;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      labels.push_back(cohort.rows[rows[i]].label == RiskLabel::kHigh ? 1 : 0);
      for (std::size_t e = 0; e < kEmotionCount; ++e)
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e)) = *cohort.rows[rows[i]].emotion_intensities[e];
    }
    std::vector<std::string> names(kEmotionColumns.begin(), kEmotionColumns.end());
    try {
      report.stepwise = stats::stepwise_lda(x, labels, cfg.stepwise, names);
      if (rows.size() < cohort.rows.size())
        report.warnings.push_back("stepwise selection on " + std::to_string(rows.size()) +
                                  " complete cases of " + std::to_string(cohort.rows.size()));
    } catch (const DegenerateError& e) {
      report.warnings.push_back(std::string("stepwise selection not run: ") + e.what());
    }
  }
  return report;
}

}  // namespace vocalrisk
