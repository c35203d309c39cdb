// vocalrisk/pipeline/config.hpp

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

// Settings file. The accepted syntax is the flat subset of TOML that every
// configuration here needs -- [section] headers, key = value, '#' comments,
// quoted strings, numbers and booleans -- read with Boost.PropertyTree's INI
// parser after comments and quotes are normalized. Unknown keys are errors.
//
//   [features]  frame_length_s hop_s window pitch_frame_length_s f0_min_hz
//               f0_max_hz voicing_threshold mel_filters mel_fmin_hz
//               mel_fmax_hz silence_db min_duration_s
//   [splice]    seg_min_s seg_max_s crossfade_s
//   [robustness] threshold
//   [screening] alpha p_enter p_remove priors ridge mancova
//   [crossdb]   c iterations test_fraction

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "vocalrisk/errors.hpp"
#include "vocalrisk/features.hpp"
#include "vocalrisk/pipeline/crossdb.hpp"
#include "vocalrisk/pipeline/csv.hpp"
#include "vocalrisk/pipeline/screening.hpp"
#include "vocalrisk/splice.hpp"

namespace vocalrisk {

struct AppConfig {
  FeatureConfig features;
  SpliceConfig splice;
  double robustness_threshold = 0.95;
  ScreeningConfig screening;
  stats::SvmOptions svm;
  double crossdb_test_fraction = 0.3;
};

namespace detail {

// drop '#' comments outside quotes and unquote values
inline std::string normalize_toml(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    std::string kept;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
        continue;
      }
      if (c == '#' && !quoted) break;
      kept += c;
    }
    out += kept + "\n";
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  double d = 0.0;
  if (!parse_number(v, d)) throw ValidationError("config: " + key + " = '" + v + "' is not a number");
  return d;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValidationError("config: " + key + " = '" + v + "' is not true/false");
}

}  // namespace detail

inline AppConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(detail::normalize_toml(text));
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  AppConfig cfg;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const auto num = [](double& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = detail::to_double(k, v); };
  };
  const auto integer = [](int& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) {
      const double d = detail::to_double(k, v);
      if (d != static_cast<int>(d)) throw ValidationError("config: " + k + " must be an integer");
      field = static_cast<int>(d);
    };
  };
  const auto flag = [](bool& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = detail::to_bool(k, v); };
  };
  std::map<std::string, Setter> setters = {
      {"features.frame_length_s", num(cfg.features.frame_length_s)},
      {"features.hop_s", num(cfg.features.hop_s)},
      {"features.window", [&](const std::string&, const std::string& v) { cfg.features.window = parse_window_kind(v); }},
      {"features.pitch_frame_length_s", num(cfg.features.pitch_frame_length_s)},
      {"features.f0_min_hz", num(cfg.features.pitch.fmin_hz)},
      {"features.f0_max_hz", num(cfg.features.pitch.fmax_hz)},
      {"features.voicing_threshold", num(cfg.features.pitch.voicing_threshold)},
      {"features.mel_filters", integer(cfg.features.mel.n_filters)},
      {"features.mel_fmin_hz", num(cfg.features.mel.fmin_hz)},
      {"features.mel_fmax_hz", num(cfg.features.mel.fmax_hz)},
      {"features.silence_db", num(cfg.features.silence_db)},
      {"features.min_duration_s", num(cfg.features.min_duration_s)},
      {"splice.seg_min_s", num(cfg.splice.seg_min_s)},
      {"splice.seg_max_s", num(cfg.splice.seg_max_s)},
      {"splice.crossfade_s", num(cfg.splice.crossfade_s)},
      {"robustness.threshold", num(cfg.robustness_threshold)},
      {"screening.alpha", num(cfg.screening.alpha)},
      {"screening.p_enter", num(cfg.screening.stepwise.p_enter)},
      {"screening.p_remove", num(cfg.screening.stepwise.p_remove)},
      {"screening.priors",
       [&](const std::string&, const std::string& v) { cfg.screening.lda.priors = stats::parse_priors(v); }},
      {"screening.ridge", flag(cfg.screening.lda.ridge)},
      {"screening.mancova", flag(cfg.screening.mancova)},
      {"crossdb.c", num(cfg.svm.c)},
      {"crossdb.iterations", integer(cfg.svm.iterations)},
      {"crossdb.test_fraction", num(cfg.crossdb_test_fraction)},
  };
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ValidationError("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters.find(full);
      if (it == setters.end()) throw ValidationError("config: unknown key '" + full + "'");
      it->second(full, CsvHeader::trim(value.data()));
    }
  }
  cfg.features.validate();
  cfg.splice.validate();
  return cfg;
}

inline AppConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

}  // namespace vocalrisk
