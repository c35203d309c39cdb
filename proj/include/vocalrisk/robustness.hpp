// vocalrisk/robustness.hpp

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

// Splice robustness: extract features from each recording before and after
// random splicing and measure agreement across the corpus with the
// concordance correlation coefficient.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "vocalrisk/audio.hpp"
#include "vocalrisk/errors.hpp"
#include "vocalrisk/features.hpp"
#include "vocalrisk/parallel.hpp"
#include "vocalrisk/splice.hpp"

namespace vocalrisk {

namespace detail {

inline void check_pair(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size())
    throw ValidationError(std::string(what) + ": length mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) throw ValidationError(std::string(what) + ": need at least two values");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw ValidationError(std::string(what) + ": non-finite value at index " + std::to_string(i));
}

struct Moments {
  double mean_x = 0.0, mean_y = 0.0, var_x = 0.0, var_y = 0.0, cov = 0.0;
};

// population (1/n) moments, two-pass
inline Moments moments(std::span<const double> x, std::span<const double> y) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.mean_x += x[i];
    m.mean_y += y[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x, dy = y[i] - m.mean_y;
    m.var_x += dx * dx;
    m.var_y += dy * dy;
    m.cov += dx * dy;
  }
  m.var_x /= n;
  m.var_y /= n;
  m.cov /= n;
  return m;
}

}  // namespace detail

/// Lin's concordance correlation coefficient,
///   2 cov(x, y) / (var(x) + var(y) + (mean(x) - mean(y))^2).
inline double ccc(std::span<const double> x, std::span<const double> y) {
  detail::check_pair(x, y, "ccc");
  const detail::Moments m = detail::moments(x, y);
  const double shift = m.mean_x - m.mean_y;
  const double denom = m.var_x + m.var_y + shift * shift;
  if (!(denom > 0.0)) throw DegenerateError("ccc undefined: both series constant and equal");
  return 2.0 * m.cov / denom;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  detail::check_pair(x, y, "pearson");
  const detail::Moments m = detail::moments(x, y);
  if (!(m.var_x > 0.0) || !(m.var_y > 0.0))
    throw DegenerateError("pearson correlation undefined for a constant series");
  return m.cov / std::sqrt(m.var_x * m.var_y);
}

struct FeatureRobustness {
  std::string feature;
  std::optional<double> ccc;        // nullopt when undefined on this corpus
  std::optional<double> pearson_r;
  double mean_difference = 0.0;     // mean(spliced) - mean(original)
  std::size_t n = 0;                // recordings where both values exist
  bool pass = false;
  bool control = false;             // dynamic control, not part of the gate
};

struct CccReport {
  std::vector<FeatureRobustness> features;
  double threshold = 0.95;
  std::size_t corpus_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  /// True when every non-control feature reaches the threshold.
  bool all_pass() const {
    return std::all_of(features.begin(), features.end(),
                       [](const FeatureRobustness& f) { return f.control || f.pass; });
  }
  const FeatureRobustness* find(std::string_view name) const {
    for (const auto& f : features)
      if (f.feature == name) return &f;
    return nullptr;
  }
};

inline constexpr std::string_view kF0SlopeControl = "f0_slope_hz_per_s";

struct NamedRecording {
  std::string name;
  AudioBuffer buffer;
};

struct RobustnessOptions {
  SpliceConfig splice;  // seed acts as the master seed
  FeatureConfig features;
  double threshold = 0.95;
  bool include_control = true;
  bool all_features = false;  // report every acoustic feature, not only the risk set
  unsigned jobs = 1;
  std::size_t min_files = 10;
};

inline FeatureRobustness compare_feature(std::string name, const std::vector<double>& original,
                                         const std::vector<double>& spliced, double threshold) {
  FeatureRobustness r;
  r.feature = std::move(name);
  r.n = original.size();
  if (r.n >= 2) {
    double diff = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) diff += spliced[i] - original[i];
    r.mean_difference = diff / static_cast<double>(r.n);
    try {
      r.ccc = ccc(original, spliced);
    } catch (const DegenerateError&) {
    }
    try {
      r.pearson_r = pearson(original, spliced);
    } catch (const DegenerateError&) {
    }
  }
  r.pass = r.ccc.has_value() && *r.ccc >= threshold;
  return r;
}

/// Robustness over in-memory recordings. Each recording is spliced with its
/// own seed derived from the master seed and the recording name.
inline CccReport robustness_report(const std::vector<NamedRecording>& corpus,
                                   const RobustnessOptions& opt) {
  opt.splice.validate();
  if (corpus.size() < opt.min_files)
    throw ValidationError("robustness needs at least " + std::to_string(opt.min_files) +
                          " usable recordings, got " + std::to_string(corpus.size()));

  struct Pair {
    std::optional<Analysis> original, spliced;
    std::string error;
  };
  std::vector<Pair> results(corpus.size());
  parallel_for(corpus.size(), opt.jobs, [&](std::size_t i) {
    try {
      SpliceConfig sc = opt.splice;
      sc.seed = derive_seed(opt.splice.seed, corpus[i].name);
      const SplicePlan plan = plan_splice(corpus[i].buffer, sc);
      const AudioBuffer spliced = apply_splice(corpus[i].buffer, plan, sc.crossfade_s);
      results[i].original = analyze(corpus[i].buffer, opt.features);
      results[i].spliced = analyze(spliced, opt.features);
    } catch (const Error& e) {
      results[i].error = e.what();
    }
  });

  CccReport report;
  report.threshold = opt.threshold;
  report.seed = opt.splice.seed;
  std::size_t usable = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (results[i].error.empty())
      ++usable;
    else
      report.warnings.push_back("skipped " + corpus[i].name + ": " + results[i].error);
  }
  if (usable < opt.min_files)
    throw ValidationError("robustness needs at least " + std::to_string(opt.min_files) +
                          " usable recordings, got " + std::to_string(usable));
  report.corpus_size = usable;

  std::vector<Feature> selected;
  if (opt.all_features)
    selected.assign(kAcousticFeatures.begin(), kAcousticFeatures.end());
  else
    selected.assign(kRiskFeatures.begin(), kRiskFeatures.end());

  for (Feature f : selected) {
    std::vector<double> a, b;
    for (const auto& r : results) {
      if (!r.error.empty()) continue;
      const auto& va = r.original->features[f];
      const auto& vb = r.spliced->features[f];
      if (va && vb) {
        a.push_back(*va);
        b.push_back(*vb);
      }
    }
    report.features.push_back(compare_feature(std::string(feature_name(f)), a, b, opt.threshold));
  }
  if (opt.include_control) {
    std::vector<double> a, b;
    for (const auto& r : results) {
      if (!r.error.empty()) continue;
      const auto sa = f0_linear_slope(r.original->contour);
      const auto sb = f0_linear_slope(r.spliced->contour);
      if (sa && sb) {
        a.push_back(*sa);
        b.push_back(*sb);
      }
    }
    FeatureRobustness c = compare_feature(std::string(kF0SlopeControl), a, b, opt.threshold);
    c.control = true;
    report.features.push_back(std::move(c));
  }
  return report;
}

/// Sorted *.wav files of a directory (non-recursive).
inline std::vector<std::filesystem::path> list_wav_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline CccReport robustness_report(const std::filesystem::path& corpus_dir,
                                   const RobustnessOptions& opt) {
  std::vector<NamedRecording> corpus;
  std::vector<std::string> warnings;
  for (const auto& path : list_wav_files(corpus_dir)) {
    try {
      corpus.push_back({path.filename().string(), load_wav(path)});
    } catch (const Error& e) {
      warnings.push_back("unreadable " + path.filename().string() + ": " + e.what());
    }
  }
  CccReport report = robustness_report(corpus, opt);
  report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
  return report;
}

inline nlohmann::ordered_json to_json(const CccReport& report) {
  nlohmann::ordered_json j;
  j["threshold"] = report.threshold;
  j["corpus_size"] = report.corpus_size;
  j["seed"] = report.seed;
  j["all_pass"] = report.all_pass();
  auto& arr = j["features"] = nlohmann::ordered_json::array();
  for (const auto& f : report.features) {
    nlohmann::ordered_json e;
    e["feature"] = f.feature;
    e["ccc"] = f.ccc ? nlohmann::ordered_json(*f.ccc) : nlohmann::ordered_json(nullptr);
    e["pearson_r"] = f.pearson_r ? nlohmann::ordered_json(*f.pearson_r) : nlohmann::ordered_json(nullptr);
    e["mean_difference"] = f.mean_difference;
    e["n"] = f.n;
    e["pass"] = f.pass;
    e["control"] = f.control;
    arr.push_back(std::move(e));
  }
  j["warnings"] = report.warnings;
  return j;
}

}  // namespace vocalrisk
