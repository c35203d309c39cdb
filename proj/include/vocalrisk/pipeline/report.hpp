// vocalrisk/pipeline/report.hpp

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

// Report renderings. JSON keeps full double precision (round-trippable and
// byte-stable); text and CSV use fixed precision: p and partial eta squared
// to 3 decimals, means to 2.

#pragma once

#include <cstdio>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "vocalrisk/errors.hpp"
#include "vocalrisk/pipeline/csv.hpp"
#include "vocalrisk/pipeline/screening.hpp"

namespace vocalrisk {

using Json = nlohmann::ordered_json;

enum class ReportFormat { kJson, kText, kCsv };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "text" || s == "txt") return ReportFormat::kText;
  if (s == "csv") return ReportFormat::kCsv;
  throw ValidationError("unknown report format '" + s + "' (json, text or csv)");
}

/// Format from a file extension; JSON when unknown.
inline ReportFormat report_format_for(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".txt") return ReportFormat::kText;
  if (ext == ".csv") return ReportFormat::kCsv;
  return ReportFormat::kJson;
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

namespace detail {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json vector_json(const stats::Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace detail

inline Json to_json(const ScreeningConfig& cfg) {
  Json j;
  Json features = Json::array();
  for (Feature f : cfg.features) features.push_back(std::string(feature_name(f)));
  j["features"] = features;
  j["covariates"] = {"gad7", "wemwbs", "gender", "country"};
  j["risk_rule"] = "high if phq8 >= 10";
  j["alpha"] = cfg.alpha;
  j["priors"] = stats::to_string(cfg.lda.priors);
  j["ridge"] = cfg.lda.ridge;
  j["p_enter"] = cfg.stepwise.p_enter;
  j["p_remove"] = cfg.stepwise.p_remove;
  j["mancova"] = cfg.mancova;
  return j;
}

inline Json to_json(const AnalysisReport& r) {
  Json j;
  j["disclaimer"] = std::string(kDisclaimer);
  j["groups"] = {{"low", r.n_low}, {"high", r.n_high}};
  j["config"] = to_json(r.config);

  Json rows = Json::array();
  for (const auto& a : r.ancova.rows) {
    Json e;
    e["feature"] = a.feature;
    e["adjusted_mean_low"] = a.adjusted_mean_low;
    e["adjusted_mean_high"] = a.adjusted_mean_high;
    e["f"] = a.f;
    e["df1"] = a.df1;
    e["df2"] = a.df2;
    e["p"] = a.p;
    e["partial_eta2"] = a.partial_eta2;
    e["n_low"] = a.n_low;
    e["n_high"] = a.n_high;
    e["p_bh_supplementary"] = detail::optional_json(a.p_bh);
    rows.push_back(std::move(e));
  }
  j["ancova"] = rows;
  if (r.ancova.mancova_wilks)
    j["mancova"] = {{"wilks_lambda", *r.ancova.mancova_wilks}, {"p", detail::optional_json(r.ancova.mancova_p)}};
  else
    j["mancova"] = nullptr;

  if (r.discriminant) {
    const auto& d = *r.discriminant;
    Json e;
    e["variables"] = d.variables;
    Json structure = Json::array();
    for (std::size_t k = 0; k < d.variables.size(); ++k)
      structure.push_back({{"variable", d.variables[k]}, {"r", d.structure(static_cast<Eigen::Index>(k))}});
    e["structure_matrix"] = structure;
    e["standardized_coefficients"] = detail::vector_json(d.standardized_weights);
    e["raw_coefficients"] = detail::vector_json(d.weights);
    e["constant"] = d.constant;
    e["eigenvalue"] = d.eigenvalue;
    e["canonical_correlation"] = d.canonical_correlation;
    e["wilks_lambda"] = d.wilks_lambda;
    e["chi_square"] = d.chi_square;
    e["df"] = d.df;
    e["p"] = d.p_value;
    e["centroids"] = {{"low", d.centroid_low}, {"high", d.centroid_high}};
    e["priors"] = {{"low", d.prior_low}, {"high", d.prior_high}};
    e["n"] = {{"low", d.n_low}, {"high", d.n_high}};
    e["resubstitution_accuracy"] = d.resubstitution_accuracy;
    e["loo_accuracy"] = detail::optional_json(d.loo_accuracy);
    e["ridge_epsilon"] = detail::optional_json(d.ridge_epsilon);
    j["discriminant"] = e;
  } else {
    j["discriminant"] = nullptr;
  }

  if (r.stepwise) {
    const auto& s = *r.stepwise;
    Json e;
    e["n_cases"] = s.n_cases;
    e["p_enter"] = s.options.p_enter;
    e["p_remove"] = s.options.p_remove;
    Json ev = Json::array();
    for (const auto& x : s.events)
      ev.push_back({{"step", x.step},
                    {"action", x.entered ? "enter" : "remove"},
                    {"variable", x.variable},
                    {"f", x.f},
                    {"df1", x.df1},
                    {"df2", x.df2},
                    {"significance", x.significance},
                    {"wilks_lambda", x.wilks_lambda}});
    e["events"] = ev;
    Json fin = Json::array();
    for (const auto& v : s.final_set)
      fin.push_back({{"variable", v.variable}, {"f_to_remove", v.f_to_remove}, {"sig_f_to_remove", v.significance}});
    e["final_set"] = fin;
    e["wilks_lambda"] = s.wilks_lambda;
    j["stepwise"] = e;
  } else {
    j["stepwise"] = nullptr;
  }
  j["warnings"] = r.warnings;
  return j;
}

/// Group-comparison table as CSV.
inline std::string ancova_csv(const AnalysisReport& r) {
  std::string out = "feature,low_risk_mean,high_risk_mean,f,p,partial_eta2,p_bh_supplementary\n";
  for (const auto& a : r.ancova.rows) {
    out += csv_escape(a.feature) + "," + fixed(a.adjusted_mean_low, 2) + "," + fixed(a.adjusted_mean_high, 2) + "," +
           fixed(a.f, 2) + "," + fixed(a.p, 3) + "," + fixed(a.partial_eta2, 3) + "," +
           (a.p_bh ? fixed(*a.p_bh, 3) : std::string("NA")) + "\n";
  }
  return out;
}

/// One row per recording, canonical feature names as header, NA for absent
/// values, plus the extraction flags.
inline std::string feature_table_csv(const std::vector<std::pair<std::string, FeatureVector>>& rows) {
  std::string out = "file";
  for (const auto& info : kFeatureInfo) out += "," + std::string(info.name);
  out += ",flags\n";
  for (const auto& [name, fv] : rows) {
    out += csv_escape(name);
    for (const auto& v : fv.values) {
      char buf[64];
      if (v)
        std::snprintf(buf, sizeof buf, "%.10g", *v);
      else
        std::snprintf(buf, sizeof buf, "NA");
      out += ",";
      out += buf;
    }
    std::string flags;
    for (const auto& f : fv.flags) flags += (flags.empty() ? "" : ";") + f;
    out += "," + csv_escape(flags) + "\n";
  }
  return out;
}

inline std::string pad(std::string s, std::size_t width, bool left = true) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

inline std::string report_text(const AnalysisReport& r) {
  std::string out;
  out += std::string(kDisclaimer) + "\n\n";
  out += "Participants: low risk " + std::to_string(r.n_low) + ", high risk " + std::to_string(r.n_high) + "\n\n";
  out += "Group comparison adjusted for gad7, wemwbs, gender, country\n";
  out += pad("feature", 24) + pad("low mean", 12, false) + pad("high mean", 12, false) + pad("p", 8, false) +
         pad("eta2", 8, false) + pad("p(BH)*", 9, false) + "\n";
  for (const auto& a : r.ancova.rows)
    out += pad(a.feature, 24) + pad(fixed(a.adjusted_mean_low, 2), 12, false) +
           pad(fixed(a.adjusted_mean_high, 2), 12, false) + pad(fixed(a.p, 3), 8, false) +
           pad(fixed(a.partial_eta2, 3), 8, false) + pad(a.p_bh ? fixed(*a.p_bh, 3) : "NA", 9, false) + "\n";
  out += "* Benjamini-Hochberg adjusted, supplementary\n";
  if (r.ancova.mancova_wilks)
    out += "Omnibus: Wilks lambda " + fixed(*r.ancova.mancova_wilks, 3) + ", p " + fixed(*r.ancova.mancova_p, 3) + "\n";
  out += "\n";
  if (r.discriminant) {
    const auto& d = *r.discriminant;
    out += "Discriminant analysis (" + std::string(stats::to_string(r.config.lda.priors)) + " priors)\n";
    out += "Structure matrix\n";
    for (std::size_t k = 0; k < d.variables.size(); ++k)
      out += "  " + pad(d.variables[k], 24) + pad(fixed(d.structure(static_cast<Eigen::Index>(k)), 3), 8, false) + "\n";
    out += "Wilks lambda " + fixed(d.wilks_lambda, 3) + ", chi2(" + fixed(d.df, 0) + ") " + fixed(d.chi_square, 2) +
           ", p " + fixed(d.p_value, 3) + "\n";
    out += "Centroids: low " + fixed(d.centroid_low, 3) + ", high " + fixed(d.centroid_high, 3) + "\n";
    out += "Accuracy " + fixed(100.0 * d.resubstitution_accuracy, 1) + "%";
    if (d.loo_accuracy) out += " (cross-validated " + fixed(100.0 * *d.loo_accuracy, 1) + "%)";
    out += "\n\n";
  } else {
    out += "Discriminant analysis not run\n\n";
  }
  if (r.stepwise) {
    out += "Stepwise selection over emotion intensities (n = " + std::to_string(r.stepwise->n_cases) + ")\n";
    for (const auto& e : r.stepwise->events)
      out += "  step " + std::to_string(e.step) + (e.entered ? " enter  " : " remove ") + pad(e.variable, 16) +
             " F " + fixed(e.f, 2) + ", sig " + fixed(e.significance, 3) + "\n";
    for (const auto& v : r.stepwise->final_set)
      out += "  retained " + pad(v.variable, 16) + " sig. of F to remove " + fixed(v.significance, 3) + "\n";
    if (r.stepwise->final_set.empty()) out += "  no variable entered\n";
    out += "\n";
  }
  if (!r.warnings.empty()) {
    out += "Warnings\n";
    for (const auto& w : r.warnings) out += "  " + w + "\n";
  }
  return out;
}

inline std::string render_report(const AnalysisReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return to_json(r).dump(2) + "\n";
    case ReportFormat::kText: return report_text(r);
    case ReportFormat::kCsv: return ancova_csv(r);
  }
  return {};
}

inline void emit_report(const AnalysisReport& r, ReportFormat format, const std::filesystem::path& path) {
  write_text_file(path, render_report(r, format));
}

}  // namespace vocalrisk
