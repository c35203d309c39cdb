// vocalrisk/pipeline/cohort.hpp

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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vocalrisk/audio.hpp"
#include "vocalrisk/errors.hpp"
#include "vocalrisk/features.hpp"
#include "vocalrisk/parallel.hpp"
#include "vocalrisk/pipeline/manifest.hpp"
#include "vocalrisk/splice.hpp"

namespace vocalrisk {

/// One participant after extraction and averaging.
struct CohortRow {
  std::string participant_id;
  RiskLabel label = RiskLabel::kLow;
  std::string gender;
  std::string country;
  int phq8 = 0;
  int gad7 = 0;
  int wemwbs = 14;
  FeatureVector features;  // arithmetic mean over recordings
  std::array<std::optional<double>, kEmotionCount> emotion_intensities{};
  std::size_t recordings_averaged = 0;
};

struct CohortTable {
  std::vector<CohortRow> rows;
  std::vector<std::string> warnings;

  std::size_t count(RiskLabel l) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.label == l;
    return n;
  }
};

using FeatureExtractor = std::function<FeatureVector(const std::filesystem::path&)>;

struct CohortOptions {
  FeatureConfig features;
  unsigned jobs = 1;
  // Splice each recording before extraction, seeded per file from this
  // master seed; mirrors extraction on anonymized uploads.
  std::optional<SpliceConfig> splice;
};

/// Per-feature arithmetic mean over the vectors that have the value.
inline FeatureVector average_features(const std::vector<FeatureVector>& vectors) {
  FeatureVector out;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : vectors)
      if (v.values[f]) {
        sum += *v.values[f];
        ++n;
      }
    if (n > 0) out.values[f] = sum / static_cast<double>(n);
  }
  return out;
}

inline FeatureExtractor default_extractor(const CohortOptions& opt) {
  return [opt](const std::filesystem::path& path) {
    AudioBuffer buffer = load_wav(path);
    if (opt.splice) {
      SpliceConfig sc = *opt.splice;
      sc.seed = derive_seed(opt.splice->seed, path.filename().string());
      const SplicePlan plan = plan_splice(buffer, sc);
      buffer = apply_splice(buffer, plan, sc.crossfade_s);
    }
    return extract_feature_vector(buffer, opt.features);
  };
}

/// Extracts every recording (in parallel), averages per participant and
/// attaches the risk label. Unusable recordings and participants without
/// any usable recording become warnings.
inline CohortTable build_cohort(const std::vector<ParticipantRecord>& records, const CohortOptions& opt = {},
                                FeatureExtractor extractor = {}) {
  if (!extractor) extractor = default_extractor(opt);
  struct Job {
    std::size_t participant;
    std::filesystem::path path;
    std::optional<FeatureVector> result;
    std::string error;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < records.size(); ++p)
    for (const auto& path : records[p].recordings) jobs.push_back({p, path, std::nullopt, {}});
  parallel_for(jobs.size(), opt.jobs, [&](std::size_t i) {
    try {
      jobs[i].result = extractor(jobs[i].path);
    } catch (const Error& e) {
      jobs[i].error = e.what();
    }
  });

  CohortTable table;
  std::vector<std::vector<FeatureVector>> per(records.size());
  for (const auto& j : jobs) {
    if (j.result)
      per[j.participant].push_back(*j.result);
    else
      table.warnings.push_back("recording " + j.path.string() + " skipped: " + j.error);
  }
  for (std::size_t p = 0; p < records.size(); ++p) {
    const ParticipantRecord& rec = records[p];
    if (per[p].empty()) {
      table.warnings.push_back("participant " + rec.participant_id + " excluded: no usable recording");
      continue;
    }
    CohortRow row;
    row.participant_id = rec.participant_id;
    row.label = rec.label();
    row.gender = rec.gender;
    row.country = rec.country;
    row.phq8 = rec.phq8;
    row.gad7 = rec.gad7;
    row.wemwbs = rec.wemwbs;
    row.features = average_features(per[p]);
    row.emotion_intensities = rec.emotion_intensities;
    row.recordings_averaged = per[p].size();
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace vocalrisk
