// vocalrisk/pipeline/crossdb.hpp

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

// Cross-corpus emotion classification grid. Corpus manifests are CSV files
// with columns audio_path,label[,split]; split is "train" or "test". Cell
// (i, j) trains on corpus i and tests on corpus j; diagonal cells use the
// corpus' own train/test split.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "vocalrisk/errors.hpp"
#include "vocalrisk/features.hpp"
#include "vocalrisk/parallel.hpp"
#include "vocalrisk/pipeline/cohort.hpp"
#include "vocalrisk/pipeline/csv.hpp"
#include "vocalrisk/stats/svm.hpp"

namespace vocalrisk {

inline constexpr std::array<std::string_view, 4> kEmotionLabels = {"neutral", "happy", "angry", "sad"};

struct CorpusItem {
  std::filesystem::path path;
  std::string label;
  bool test = false;
  FeatureVector features;
};

struct LabeledCorpus {
  std::string name;
  std::vector<CorpusItem> items;
  std::vector<std::string> warnings;
};

struct CrossDbOptions {
  FeatureConfig features;
  stats::SvmOptions svm;
  unsigned jobs = 1;
  double test_fraction = 0.3;  // used when a manifest has no split column
  std::uint64_t seed = 0;
};

struct CrossDbResult {
  std::vector<std::string> corpora;
  std::vector<std::vector<double>> accuracy;  // [train][test]
  std::vector<std::vector<std::size_t>> n_train, n_test;
  std::vector<std::string> labels;
  std::vector<std::string> feature_names;
  CrossDbOptions options;
  std::vector<std::string> warnings;
};

/// Reads a corpus manifest without extracting features. Items without an
/// explicit split are assigned per label by a seeded ranking so the
/// partition is stable and stratified.
inline LabeledCorpus read_corpus_manifest(const std::filesystem::path& manifest, const CrossDbOptions& opt) {
  const auto rows = parse_csv(read_text_file(manifest));
  if (rows.empty()) throw ValidationError("corpus manifest " + manifest.string() + " is empty");
  const CsvHeader header(rows[0]);
  const std::size_t c_path = header.at("audio_path"), c_label = header.at("label");
  const bool has_split = header.has("split");
  LabeledCorpus corpus;
  corpus.name = manifest.stem().string();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = manifest.filename().string() + " row " + std::to_string(r) + ": ";
    if (row.size() != rows[0].size()) throw ValidationError(where + "wrong field count");
    CorpusItem item;
    item.path = CsvHeader::trim(row[c_path]);
    if (item.path.is_relative()) item.path = manifest.parent_path() / item.path;
    item.label = CsvHeader::trim(row[c_label]);
    if (std::find(kEmotionLabels.begin(), kEmotionLabels.end(), item.label) == kEmotionLabels.end())
      throw ValidationError(where + "label '" + item.label + "' not in {neutral, happy, angry, sad}");
    if (has_split) {
      const std::string s = CsvHeader::trim(row[header.at("split")]);
      if (s != "train" && s != "test") throw ValidationError(where + "split must be train or test");
      item.test = s == "test";
    }
    corpus.items.push_back(std::move(item));
  }
  if (!has_split) {
    for (std::string_view label : kEmotionLabels) {
      std::vector<std::pair<std::uint64_t, std::size_t>> ranked;
      for (std::size_t i = 0; i < corpus.items.size(); ++i)
        if (corpus.items[i].label == label)
          ranked.emplace_back(derive_seed(opt.seed, corpus.items[i].path.filename().string()), i);
      std::sort(ranked.begin(), ranked.end());
      const auto n_test = static_cast<std::size_t>(std::llround(opt.test_fraction * ranked.size()));
      for (std::size_t k = 0; k < n_test && k < ranked.size(); ++k) corpus.items[ranked[k].second].test = true;
    }
  }
  return corpus;
}

/// Extracts features for every item; failures are dropped with a warning.
inline void extract_corpus(LabeledCorpus& corpus, const CrossDbOptions& opt, FeatureExtractor extractor = {}) {
  if (!extractor) {
    CohortOptions co;
    co.features = opt.features;
    extractor = default_extractor(co);
  }
  std::vector<std::string> errors(corpus.items.size());
  parallel_for(corpus.items.size(), opt.jobs, [&](std::size_t i) {
    try {
      corpus.items[i].features = extractor(corpus.items[i].path);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  std::vector<CorpusItem> kept;
  for (std::size_t i = 0; i < corpus.items.size(); ++i) {
    if (errors[i].empty())
      kept.push_back(std::move(corpus.items[i]));
    else
      corpus.warnings.push_back(corpus.name + ": " + corpus.items[i].path.filename().string() + " skipped: " + errors[i]);
  }
  corpus.items = std::move(kept);
}

namespace detail {

struct Split {
  stats::Matrix x;
  std::vector<int> y;
};

// train rows -> matrix with missing values imputed by the training means
inline Split design_rows(const std::vector<const CorpusItem*>& items, const std::vector<std::string>& labels,
                         const std::vector<double>& fill) {
  Split s;
  s.x.resize(static_cast<Eigen::Index>(items.size()), static_cast<Eigen::Index>(kAcousticFeatures.size()));
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t f = 0; f < kAcousticFeatures.size(); ++f) {
      const auto& v = items[i]->features[kAcousticFeatures[f]];
      s.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = v ? *v : fill[f];
    }
    s.y.push_back(static_cast<int>(std::find(labels.begin(), labels.end(), items[i]->label) - labels.begin()));
  }
  return s;
}

inline std::vector<double> column_means(const std::vector<const CorpusItem*>& items) {
  std::vector<double> m(kAcousticFeatures.size(), 0.0);
  for (std::size_t f = 0; f < kAcousticFeatures.size(); ++f) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto* it : items)
      if (const auto& v = it->features[kAcousticFeatures[f]]) {
        sum += *v;
        ++n;
      }
    m[f] = n ? sum / static_cast<double>(n) : 0.0;
  }
  return m;
}

}  // namespace detail

/// Full grid over already-extracted corpora.
inline CrossDbResult crossdb_grid(const std::vector<LabeledCorpus>& corpora, const CrossDbOptions& opt) {
  if (corpora.size() < 2) throw ValidationError("crossdb needs at least two corpora");
  std::set<std::string> reference;
  for (const auto& it : corpora[0].items) reference.insert(it.label);
  for (const auto& c : corpora) {
    std::set<std::string> labels;
    for (const auto& it : c.items) labels.insert(it.label);
    if (labels != reference)
      throw ValidationError("label set of corpus '" + c.name + "' differs from '" + corpora[0].name + "'");
  }
  if (reference.size() < 2) throw ValidationError("crossdb needs at least two emotion labels");

  CrossDbResult res;
  res.options = opt;
  res.labels.assign(reference.begin(), reference.end());
  for (Feature f : kAcousticFeatures) res.feature_names.emplace_back(feature_name(f));
  const std::size_t n = corpora.size();
  res.accuracy.assign(n, std::vector<double>(n, 0.0));
  res.n_train.assign(n, std::vector<std::size_t>(n, 0));
  res.n_test.assign(n, std::vector<std::size_t>(n, 0));
  for (const auto& c : corpora) {
    res.corpora.push_back(c.name);
    res.warnings.insert(res.warnings.end(), c.warnings.begin(), c.warnings.end());
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<const CorpusItem*> train, test;
      for (const auto& it : corpora[i].items)
        if (i != j || !it.test) train.push_back(&it);
      for (const auto& it : corpora[j].items)
        if (i != j || it.test) test.push_back(&it);
      if (train.empty() || test.empty())
        throw ValidationError("crossdb cell " + corpora[i].name + " -> " + corpora[j].name + " has an empty split");
      const auto fill = detail::column_means(train);
      const auto tr = detail::design_rows(train, res.labels, fill);
      const auto te = detail::design_rows(test, res.labels, fill);
      const auto model = stats::train_linear_svm(tr.x, tr.y, opt.svm);
      res.accuracy[i][j] = stats::accuracy(stats::predict(model, te.x), te.y);
      res.n_train[i][j] = train.size();
      res.n_test[i][j] = test.size();
    }
  }
  return res;
}

inline CrossDbResult run_crossdb(const std::vector<std::filesystem::path>& manifests, const CrossDbOptions& opt,
                                 FeatureExtractor extractor = {}) {
  std::vector<LabeledCorpus> corpora;
  for (const auto& m : manifests) {
    corpora.push_back(read_corpus_manifest(m, opt));
    extract_corpus(corpora.back(), opt, extractor);
  }
  std::set<std::string> names;
  for (auto& c : corpora)
    while (!names.insert(c.name).second) c.name += "_";
  return crossdb_grid(corpora, opt);
}

inline nlohmann::ordered_json to_json(const CrossDbResult& r) {
  nlohmann::ordered_json j;
  j["corpora"] = r.corpora;
  j["labels"] = r.labels;
  j["features"] = r.feature_names;
  j["config"] = {{"c", r.options.svm.c},
                 {"iterations", r.options.svm.iterations},
                 {"test_fraction", r.options.test_fraction},
                 {"seed", r.options.seed}};
  auto cells = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.corpora.size(); ++i)
    for (std::size_t k = 0; k < r.corpora.size(); ++k)
      cells.push_back({{"train", r.corpora[i]},
                       {"test", r.corpora[k]},
                       {"mono", i == k},
                       {"accuracy", r.accuracy[i][k]},
                       {"n_train", r.n_train[i][k]},
                       {"n_test", r.n_test[i][k]}});
  j["cells"] = cells;
  j["accuracy_matrix"] = r.accuracy;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace vocalrisk
