// vocalrisk/pipeline/manifest.hpp

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

// Cohort manifest: one CSV row per recording, participant fields repeated.
//
//   participant_id,gender,country,phq8,gad7,wemwbs,
//   int_anxiety,int_sadness,int_shame,int_amusement,int_joy,int_pleasure,
//   int_7,...,int_12,audio_path
//
// Rows of one participant are merged; demographics and questionnaire scores
// must agree between rows, emotion intensities (reported per day) are
// averaged over the rows that carry them. Blank intensity = not reported.

#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vocalrisk/errors.hpp"
#include "vocalrisk/pipeline/csv.hpp"

namespace vocalrisk {

inline constexpr std::size_t kEmotionCount = 12;

inline constexpr std::array<std::string_view, kEmotionCount> kEmotionColumns = {
    "int_anxiety", "int_sadness", "int_shame", "int_amusement", "int_joy", "int_pleasure",
    "int_7",       "int_8",       "int_9",     "int_10",        "int_11",  "int_12",
};

enum class RiskLabel { kLow = 0, kHigh = 1 };

inline constexpr int kPhqCutoff = 10;

inline RiskLabel risk_label(int phq8) { return phq8 >= kPhqCutoff ? RiskLabel::kHigh : RiskLabel::kLow; }

inline const char* to_string(RiskLabel r) { return r == RiskLabel::kHigh ? "high" : "low"; }

struct ParticipantRecord {
  std::string participant_id;
  std::string gender;
  std::string country;
  int phq8 = 0;
  int gad7 = 0;
  int wemwbs = 14;
  std::array<std::optional<double>, kEmotionCount> emotion_intensities{};
  std::vector<std::filesystem::path> recordings;
  std::size_t first_row = 0;  // 1-based data row of first appearance

  RiskLabel label() const { return risk_label(phq8); }
};

namespace detail {

inline int parse_score(const std::string& field, const char* name, int lo, int hi, std::size_t row) {
  double v = 0.0;
  const std::string where = "row " + std::to_string(row) + ": ";
  if (!parse_number(field, v)) throw ValidationError(where + name + " '" + field + "' is not a number");
  if (v != std::floor(v)) throw ValidationError(where + name + " must be an integer, got " + field);
  if (v < lo || v > hi)
    throw ValidationError(where + name + " = " + CsvHeader::trim(field) + " outside range " + std::to_string(lo) +
                          "-" + std::to_string(hi));
  return static_cast<int>(v);
}

}  // namespace detail

/// Parses manifest text; relative audio paths resolve against base_dir.
inline std::vector<ParticipantRecord> parse_manifest(const std::string& text,
                                                     const std::filesystem::path& base_dir = {}) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw ValidationError("manifest is empty");
  const CsvHeader header(rows[0]);
  const std::size_t c_id = header.at("participant_id"), c_gender = header.at("gender"),
                    c_country = header.at("country"), c_phq = header.at("phq8"), c_gad = header.at("gad7"),
                    c_wem = header.at("wemwbs"), c_audio = header.at("audio_path");
  std::array<std::size_t, kEmotionCount> c_int{};
  for (std::size_t e = 0; e < kEmotionCount; ++e) c_int[e] = header.at(std::string(kEmotionColumns[e]));

  std::vector<ParticipantRecord> records;
  std::map<std::string, std::size_t> by_id;
  std::vector<std::array<std::pair<double, int>, kEmotionCount>> sums;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    const std::string where = "row " + std::to_string(r) + ": ";
    if (row.size() != rows[0].size())
      throw ValidationError(where + "expected " + std::to_string(rows[0].size()) + " fields, got " +
                            std::to_string(row.size()));
    ParticipantRecord rec;
    rec.participant_id = CsvHeader::trim(row[c_id]);
    if (rec.participant_id.empty()) throw ValidationError(where + "empty participant_id");
    rec.gender = CsvHeader::trim(row[c_gender]);
    rec.country = CsvHeader::trim(row[c_country]);
    if (rec.gender.empty()) throw ValidationError(where + "missing gender");
    if (rec.country.empty()) throw ValidationError(where + "missing country");
    rec.phq8 = detail::parse_score(row[c_phq], "phq8", 0, 24, r);
    rec.gad7 = detail::parse_score(row[c_gad], "gad7", 0, 21, r);
    rec.wemwbs = detail::parse_score(row[c_wem], "wemwbs", 14, 70, r);
    std::array<std::optional<double>, kEmotionCount> intensity{};
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      const std::string f = CsvHeader::trim(row[c_int[e]]);
      if (f.empty() || f == "NA") continue;
      double v = 0.0;
      if (!parse_number(f, v)) throw ValidationError(where + std::string(kEmotionColumns[e]) + " '" + f + "' is not a number");
      if (v < 0.0 || v > 7.0)
        throw ValidationError(where + std::string(kEmotionColumns[e]) + " = " + f + " outside range 0-7");
      intensity[e] = v;
    }
    const std::string audio = CsvHeader::trim(row[c_audio]);
    if (audio.empty()) throw ValidationError(where + "empty audio_path");
    std::filesystem::path path(audio);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;

    auto it = by_id.find(rec.participant_id);
    if (it == by_id.end()) {
      rec.first_row = r;
      by_id.emplace(rec.participant_id, records.size());
      records.push_back(rec);
      sums.emplace_back();
      it = by_id.find(rec.participant_id);
    } else {
      const ParticipantRecord& prev = records[it->second];
      auto conflict = [&](const char* field) {
        throw ValidationError(where + "participant '" + rec.participant_id + "' has conflicting " + field +
                              " (first seen in row " + std::to_string(prev.first_row) + ")");
      };
      if (prev.gender != rec.gender) conflict("gender");
      if (prev.country != rec.country) conflict("country");
      if (prev.phq8 != rec.phq8) conflict("phq8");
      if (prev.gad7 != rec.gad7) conflict("gad7");
      if (prev.wemwbs != rec.wemwbs) conflict("wemwbs");
    }
    ParticipantRecord& target = records[it->second];
    target.recordings.push_back(path);
    for (std::size_t e = 0; e < kEmotionCount; ++e)
      if (intensity[e]) {
        sums[it->second][e].first += *intensity[e];
        sums[it->second][e].second += 1;
      }
  }
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t e = 0; e < kEmotionCount; ++e)
      if (sums[i][e].second > 0) records[i].emotion_intensities[e] = sums[i][e].first / sums[i][e].second;
  return records;
}

inline std::vector<ParticipantRecord> load_manifest(const std::filesystem::path& csv_path) {
  return parse_manifest(read_text_file(csv_path), csv_path.parent_path());
}

}  // namespace vocalrisk
