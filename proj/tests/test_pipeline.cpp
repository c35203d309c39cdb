// tests/test_pipeline.cpp

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

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <map>
#include <random>

#include "synth.hpp"
#include "vocalrisk/vocalrisk.hpp"

using namespace vocalrisk;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kHeader =
    "participant_id,gender,country,phq8,gad7,wemwbs,audio_path,int_anxiety,int_sadness,int_shame,int_amusement,"
    "int_joy,int_pleasure,int_7,int_8,int_9,int_10,int_11,int_12\n";

std::string manifest_row(const std::string& id, const std::string& gender, const std::string& country, int phq,
                         int gad, int wem, const std::string& audio, const std::string& intensities = "1,2,3,4,5,6,1,1,1,1,1,1") {
  return id + "," + gender + "," + country + "," + std::to_string(phq) + "," + std::to_string(gad) + "," +
         std::to_string(wem) + "," + audio + "," + intensities + "\n";
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "vocalrisk_test_pipeline" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// cohort with a planted F0 and MFCC1 difference; features come from a lookup
struct FakeCohort {
  std::vector<ParticipantRecord> records;
  std::map<std::string, FeatureVector> features;

  FeatureExtractor extractor() const {
    return [this](const std::filesystem::path& p) {
      const auto it = features.find(p.filename().string());
      if (it == features.end()) throw IoError("no such recording " + p.string());
      return it->second;
    };
  }
};

FakeCohort fake_cohort(int n, std::uint64_t seed, double effect) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::string text = kHeader;
  FakeCohort c;
  for (int i = 0; i < n; ++i) {
    const bool high = i % 3 == 0;
    const int phq = high ? 10 + i % 15 : i % 10;
    const std::string id = "p" + std::to_string(i);
    const std::string wav = id + ".wav";
    std::string intens;
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      const double v = std::clamp(3.0 + g(rng) + (e == 1 && high ? 1.2 : 0.0), 0.0, 7.0);
      intens += (e ? "," : "") + std::to_string(v);
    }
    text += manifest_row(id, i % 5 ? "female" : "male", i % 2 ? "UK" : "DE", phq, 3 + i % 10, 40 + i % 20, wav, intens);
    FeatureVector fv;
    for (std::size_t f = 0; f < kFeatureCount; ++f) fv.values[f] = 10.0 + g(rng);
    fv[Feature::kF0HzMean] = 190.0 + 20.0 * g(rng) + (high ? -effect * 20.0 : 0.0);
    fv[Feature::kMfcc1Mean] = 5.0 + g(rng) + (high ? effect : 0.0);
    c.features[wav] = fv;
  }
  c.records = parse_manifest(text);
  return c;
}

}  // namespace

// ---------------------------------------------------------------- CSV

TEST_CASE("CSV reader", "[pipeline][csv]") {
  const auto rows = parse_csv("a,b,c\r\n1,\"x, y\",\"say \"\"hi\"\"\"\n\n2,,3");
  REQUIRE(rows.size() == 3);
  REQUIRE(rows[1][1] == "x, y");
  REQUIRE(rows[1][2] == "say \"hi\"");
  REQUIRE(rows[2][1].empty());
  REQUIRE(csv_escape("a,b") == "\"a,b\"");
  REQUIRE(csv_escape("plain") == "plain");
  double v = 0.0;
  REQUIRE(parse_number(" 3.5 ", v));
  REQUIRE(v == 3.5);
  REQUIRE_FALSE(parse_number("3.5x", v));
  REQUIRE_FALSE(parse_number("", v));
  REQUIRE_THROWS_AS(parse_csv("a,\"b\n"), ValidationError);
}

// ---------------------------------------------------------------- manifest

TEST_CASE("manifest parsing", "[pipeline][manifest]") {
  const std::string text = kHeader + manifest_row("a", "female", "UK", 12, 5, 40, "a1.wav") +
                           manifest_row("b", "male", "DE", 3, 2, 55, "/abs/b.wav", "NA,,1,1,1,1,1,1,1,1,1,1") +
                           manifest_row("a", "female", "UK", 12, 5, 40, "a2.wav", "3,4,5,6,7,0,1,1,1,1,1,1");
  const auto recs = parse_manifest(text, "/data");
  REQUIRE(recs.size() == 2);
  REQUIRE(recs[0].participant_id == "a");
  REQUIRE(recs[0].recordings.size() == 2);
  REQUIRE(recs[0].recordings[0] == std::filesystem::path("/data/a1.wav"));
  REQUIRE(recs[1].recordings[0] == std::filesystem::path("/abs/b.wav"));
  REQUIRE(recs[0].label() == RiskLabel::kHigh);
  REQUIRE(recs[1].label() == RiskLabel::kLow);
  REQUIRE_THAT(*recs[0].emotion_intensities[0], WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(*recs[0].emotion_intensities[5], WithinAbs(3.0, 1e-12));
  REQUIRE_FALSE(recs[1].emotion_intensities[0].has_value());
  REQUIRE_FALSE(recs[1].emotion_intensities[1].has_value());
}

TEST_CASE("risk label boundary", "[pipeline][manifest]") {
  REQUIRE(risk_label(9) == RiskLabel::kLow);
  REQUIRE(risk_label(10) == RiskLabel::kHigh);
  REQUIRE(risk_label(0) == RiskLabel::kLow);
  REQUIRE(risk_label(24) == RiskLabel::kHigh);
}

TEST_CASE("manifest errors", "[pipeline][manifest]") {
  REQUIRE_THROWS_WITH(parse_manifest(kHeader + manifest_row("a", "f", "UK", 25, 1, 40, "a.wav")),
                      ContainsSubstring("row 1: phq8 = 25 outside range 0-24"));
  REQUIRE_THROWS_WITH(parse_manifest(kHeader + manifest_row("a", "f", "UK", 5, 1, 10, "a.wav")),
                      ContainsSubstring("wemwbs"));
  REQUIRE_THROWS_WITH(parse_manifest(kHeader + manifest_row("a", "f", "UK", 5, 1, 40, "a.wav") +
                                     manifest_row("a", "m", "UK", 5, 1, 40, "b.wav")),
                      ContainsSubstring("row 2: participant 'a' has conflicting gender (first seen in row 1)"));
  REQUIRE_THROWS_WITH(parse_manifest(kHeader + manifest_row("a", "f", "UK", 5, 1, 40, "a.wav", "9,1,1,1,1,1,1,1,1,1,1,1")),
                      ContainsSubstring("outside range 0-7"));
  REQUIRE_THROWS_WITH(parse_manifest("participant_id,gender\nx,f\n"), ContainsSubstring("missing column"));
  REQUIRE_THROWS_WITH(parse_manifest(kHeader + "a,f,UK\n"), ContainsSubstring("fields"));
  REQUIRE_THROWS_AS(parse_manifest(kHeader + manifest_row("a", "f", "UK", 5, 1, 40, "")), ValidationError);
  REQUIRE_THROWS_AS(load_manifest("/nonexistent/manifest.csv"), IoError);
}

// ---------------------------------------------------------------- cohort

TEST_CASE("recordings are averaged per participant", "[pipeline][cohort]") {
  std::string text = kHeader;
  for (int k = 0; k < 4; ++k) text += manifest_row("a", "f", "UK", 12, 5, 40, "a" + std::to_string(k) + ".wav");
  const auto recs = parse_manifest(text);
  REQUIRE(recs.size() == 1);
  REQUIRE(recs[0].recordings.size() == 4);
  const double f0[4] = {180, 200, 185, 195};
  const auto cohort = build_cohort(recs, {}, [&](const std::filesystem::path& p) {
    FeatureVector fv;
    const int k = p.stem().string().back() - '0';
    fv[Feature::kF0HzMean] = f0[k];
    if (k < 2) fv[Feature::kHnrMean] = 10.0 * (k + 1);
    return fv;
  });
  REQUIRE(cohort.rows.size() == 1);
  REQUIRE(cohort.rows[0].recordings_averaged == 4);
  REQUIRE_THAT(*cohort.rows[0].features[Feature::kF0HzMean], WithinAbs(190.0, 1e-12));
  REQUIRE_THAT(*cohort.rows[0].features[Feature::kHnrMean], WithinAbs(15.0, 1e-12));
  REQUIRE_FALSE(cohort.rows[0].features.has(Feature::kMfcc1Mean));
}

TEST_CASE("unusable recordings become warnings", "[pipeline][cohort]") {
  std::string text = kHeader + manifest_row("a", "f", "UK", 12, 5, 40, "good.wav") +
                     manifest_row("a", "f", "UK", 12, 5, 40, "bad.wav") + manifest_row("b", "f", "UK", 2, 5, 40, "bad2.wav");
  const auto cohort = build_cohort(parse_manifest(text), {}, [](const std::filesystem::path& p) {
    if (p.string().find("bad") != std::string::npos) throw ValidationError("clipped input");
    FeatureVector fv;
    fv[Feature::kF0HzMean] = 100.0;
    return fv;
  });
  REQUIRE(cohort.rows.size() == 1);
  REQUIRE(cohort.warnings.size() == 3);
  REQUIRE_THAT(cohort.warnings.back(), ContainsSubstring("participant b excluded"));
}

TEST_CASE("cohort from real audio files", "[pipeline][cohort]") {
  const auto dir = temp_dir("audio");
  write_wav(dir / "a.wav", synth::utterance(synth::corpus_voice(0, 1.5)));
  write_wav(dir / "b.wav", synth::utterance(synth::corpus_voice(1, 1.5)));
  write_text_file(dir / "m.csv", kHeader + manifest_row("a", "f", "UK", 12, 5, 40, "a.wav") +
                                     manifest_row("b", "m", "UK", 2, 5, 40, "b.wav"));
  CohortOptions opt;
  opt.jobs = 2;
  const auto cohort = build_cohort(load_manifest(dir / "m.csv"), opt);
  REQUIRE(cohort.rows.size() == 2);
  REQUIRE(cohort.warnings.empty());
  REQUIRE(cohort.rows[0].features.has(Feature::kF0HzMean));
  opt.splice = SpliceConfig{};
  const auto spliced = build_cohort(load_manifest(dir / "m.csv"), opt);
  REQUIRE(spliced.rows.size() == 2);
  REQUIRE(*spliced.rows[0].features[Feature::kDurationS] < *cohort.rows[0].features[Feature::kDurationS]);
}

// ---------------------------------------------------------------- screening

TEST_CASE("screening finds planted differences", "[pipeline][screening]") {
  const auto fc = fake_cohort(240, 3, 0.6);
  const auto cohort = build_cohort(fc.records, {}, fc.extractor());
  REQUIRE(cohort.rows.size() == 240);
  ScreeningConfig cfg;
  cfg.mancova = true;
  const auto report = run_screening(cohort, cfg);
  REQUIRE(report.n_high == 80);
  REQUIRE(report.n_low == 160);
  REQUIRE(report.ancova.rows.size() == kAcousticFeatures.size());
  const auto find = [&](const std::string& name) {
    for (const auto& r : report.ancova.rows)
      if (r.feature == name) return r;
    FAIL("missing " << name);
    return stats::AncovaRow{};
  };
  const auto f0 = find("f0_hz_mean");
  REQUIRE(f0.p < 0.001);
  REQUIRE(f0.adjusted_mean_high < f0.adjusted_mean_low);
  const auto m1 = find("mfcc1_mean");
  REQUIRE(m1.p < 0.001);
  REQUIRE(m1.adjusted_mean_high > m1.adjusted_mean_low);
  for (const auto& r : report.ancova.rows) {
    REQUIRE(r.p_bh.has_value());
    REQUIRE(r.df2 == 240.0 - 6.0);  // intercept, group, gender, country, gad7, wemwbs
  }
  REQUIRE(report.ancova.mancova_p.has_value());
  REQUIRE(*report.ancova.mancova_p < 0.001);

  REQUIRE(report.discriminant.has_value());
  REQUIRE(std::find(report.discriminant_variables.begin(), report.discriminant_variables.end(), "f0_hz_mean") !=
          report.discriminant_variables.end());
  REQUIRE(*report.discriminant->loo_accuracy > 0.6);

  REQUIRE(report.stepwise.has_value());
  REQUIRE(!report.stepwise->events.empty());
  REQUIRE(report.stepwise->events[0].variable == "int_sadness");
}

TEST_CASE("screening handles missing and degenerate features", "[pipeline][screening]") {
  auto fc = fake_cohort(60, 4, 0.0);
  int k = 0;
  for (auto& [name, fv] : fc.features) {
    if (k++ % 4 == 0) fv[Feature::kJitterLocalMean].reset();
    fv[Feature::kHnrMean] = 4.0;
  }
  const auto report = run_screening(build_cohort(fc.records, {}, fc.extractor()));
  bool missing_warned = false, constant_warned = false;
  for (const auto& w : report.warnings) {
    missing_warned |= w.find("jitter_local_mean: 15 participant(s)") != std::string::npos;
    constant_warned |= w.find("hnr_mean skipped") != std::string::npos;
  }
  REQUIRE(missing_warned);
  REQUIRE(constant_warned);
  REQUIRE(report.ancova.rows.size() == kAcousticFeatures.size() - 1);
}

TEST_CASE("screening needs both groups", "[pipeline][screening]") {
  std::string text = kHeader;
  for (int i = 0; i < 10; ++i) text += manifest_row("p" + std::to_string(i), "f", "UK", i % 9, 5, 40, "x.wav");
  const auto cohort = build_cohort(parse_manifest(text), {}, [](const std::filesystem::path&) {
    FeatureVector fv;
    fv[Feature::kF0HzMean] = 1.0;
    return fv;
  });
  REQUIRE_THROWS_WITH(run_screening(cohort), ContainsSubstring("at least 2 participants per risk group"));
}

TEST_CASE("screening is deterministic across thread counts", "[pipeline][screening]") {
  const auto fc = fake_cohort(90, 5, 0.4);
  CohortOptions one, four;
  four.jobs = 4;
  const auto a = to_json(run_screening(build_cohort(fc.records, one, fc.extractor()))).dump(2);
  const auto b = to_json(run_screening(build_cohort(fc.records, four, fc.extractor()))).dump(2);
  REQUIRE(a == b);
}

// ---------------------------------------------------------------- reports

TEST_CASE("report formats", "[pipeline][report]") {
  const auto fc = fake_cohort(120, 6, 0.6);
  const auto report = run_screening(build_cohort(fc.records, {}, fc.extractor()));
  const auto j = to_json(report);
  REQUIRE(j["disclaimer"] == std::string(kDisclaimer));
  REQUIRE(j["groups"]["high"] == 40);
  REQUIRE(j["ancova"].size() == kAcousticFeatures.size());
  REQUIRE(j["ancova"][0].contains("p_bh_supplementary"));
  REQUIRE(j["discriminant"].contains("structure_matrix"));
  REQUIRE(j["mancova"].is_null());
  REQUIRE(nlohmann::ordered_json::parse(render_report(report, ReportFormat::kJson)) == j);

  const auto text = render_report(report, ReportFormat::kText);
  REQUIRE_THAT(text, ContainsSubstring(std::string(kDisclaimer)));
  REQUIRE_THAT(text, ContainsSubstring("f0_hz_mean"));
  REQUIRE_THAT(text, ContainsSubstring("cross-validated"));

  const auto csv = parse_csv(render_report(report, ReportFormat::kCsv));
  REQUIRE(csv.size() == kAcousticFeatures.size() + 1);
  REQUIRE(csv[0][0] == "feature");
  REQUIRE(csv[1][4].size() == 5);  // p with 3 decimals, e.g. 0.123

  REQUIRE(report_format_for("x.json") == ReportFormat::kJson);
  REQUIRE(report_format_for("x.txt") == ReportFormat::kText);
  REQUIRE(report_format_for("x.csv") == ReportFormat::kCsv);
  REQUIRE(parse_report_format("text") == ReportFormat::kText);
  REQUIRE_THROWS_AS(parse_report_format("xml"), ValidationError);
  REQUIRE(fixed(0.04449, 3) == "0.044");
  REQUIRE(fixed(195.756, 2) == "195.76");
}

TEST_CASE("feature table CSV", "[pipeline][report]") {
  FeatureVector fv;
  fv[Feature::kF0HzMean] = 123.456;
  fv.flags = {"no_voiced_frames", "x"};
  const auto csv = parse_csv(feature_table_csv({{"a,b.wav", fv}}));
  REQUIRE(csv.size() == 2);
  REQUIRE(csv[0].front() == "file");
  REQUIRE(csv[0][1] == "f0_hz_mean");
  REQUIRE(csv[0].back() == "flags");
  REQUIRE(csv[1][0] == "a,b.wav");
  REQUIRE(csv[1][1] == "123.456");
  REQUIRE(csv[1][2] == "NA");
  REQUIRE(csv[1].back() == "no_voiced_frames;x");
}

// ---------------------------------------------------------------- crossdb

namespace {

// four emotions as blobs in F0 and MFCC1; other features are shared noise
FeatureVector emotion_vector(const std::string& label, std::mt19937_64& rng, double offset) {
  std::normal_distribution<double> g(0.0, 1.0);
  const std::map<std::string, std::pair<double, double>> centre = {
      {"neutral", {0, 0}}, {"happy", {6, 0}}, {"angry", {6, 6}}, {"sad", {0, 6}}};
  FeatureVector fv;
  for (std::size_t f = 0; f < kFeatureCount; ++f) fv.values[f] = g(rng);
  fv[Feature::kF0HzMean] = 150.0 + 10.0 * (centre.at(label).first + 0.5 * g(rng)) + offset;
  fv[Feature::kMfcc1Mean] = centre.at(label).second + 0.5 * g(rng);
  return fv;
}

std::filesystem::path write_corpus(const std::filesystem::path& dir, const std::string& name, int per_label,
                                   bool split_column) {
  std::string text = split_column ? "audio_path,label,split\n" : "audio_path,label\n";
  for (std::string_view label : kEmotionLabels)
    for (int i = 0; i < per_label; ++i) {
      text += name + "_" + std::string(label) + std::to_string(i) + ".wav," + std::string(label);
      if (split_column) text += i < per_label / 4 ? ",test" : ",train";
      text += "\n";
    }
  const auto path = dir / (name + ".csv");
  write_text_file(path, text);
  return path;
}

}  // namespace

TEST_CASE("crossdb grid", "[pipeline][crossdb]") {
  const auto dir = temp_dir("crossdb");
  const auto a = write_corpus(dir, "alpha", 20, false);
  const auto b = write_corpus(dir, "beta", 16, true);
  std::mt19937_64 rng(10);
  std::map<std::string, FeatureVector> feats;
  for (const auto& m : {a, b})
    for (const auto& row : parse_csv(read_text_file(m)))
      if (row[0] != "audio_path") feats[row[0]] = emotion_vector(row[1], rng, m == a ? 0.0 : 5.0);
  const FeatureExtractor ex = [&](const std::filesystem::path& p) { return feats.at(p.filename().string()); };

  CrossDbOptions opt;
  opt.seed = 42;
  const auto res = run_crossdb({a, b}, opt, ex);
  REQUIRE(res.corpora == std::vector<std::string>{"alpha", "beta"});
  REQUIRE(res.labels.size() == 4);
  // seeded stratified split: 30% of 20 per label
  REQUIRE(res.n_test[0][0] == 4 * 6);
  REQUIRE(res.n_train[0][0] == 4 * 14);
  REQUIRE(res.n_test[1][1] == 4 * 4);
  REQUIRE(res.n_train[0][1] == 80);
  REQUIRE(res.n_test[0][1] == 64);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) REQUIRE(res.accuracy[i][k] >= 0.9);
  const auto j = to_json(res);
  REQUIRE(j["cells"].size() == 4);
  REQUIRE(j["cells"][0]["mono"] == true);
  REQUIRE(j["cells"][1]["mono"] == false);
  REQUIRE(j["config"]["c"] == 0.1);

  // same seed, same split and numbers
  REQUIRE(to_json(run_crossdb({a, b}, opt, ex)).dump() == j.dump());
  // duplicate corpus names are disambiguated
  const auto dup = run_crossdb({a, a}, opt, ex);
  REQUIRE(dup.corpora == std::vector<std::string>{"alpha", "alpha_"});
}

TEST_CASE("crossdb input errors", "[pipeline][crossdb]") {
  const auto dir = temp_dir("crossdb_err");
  write_text_file(dir / "bad.csv", "audio_path,label\nx.wav,bored\n");
  REQUIRE_THROWS_WITH(read_corpus_manifest(dir / "bad.csv", {}), ContainsSubstring("label 'bored'"));
  write_text_file(dir / "split.csv", "audio_path,label,split\nx.wav,sad,dev\n");
  REQUIRE_THROWS_WITH(read_corpus_manifest(dir / "split.csv", {}), ContainsSubstring("split must be"));

  LabeledCorpus a{"a", {}, {}}, b{"b", {}, {}};
  std::mt19937_64 rng(1);
  for (int i = 0; i < 8; ++i) {
    a.items.push_back({"a.wav", i % 2 ? "sad" : "happy", i < 2, emotion_vector(i % 2 ? "sad" : "happy", rng, 0)});
    b.items.push_back({"b.wav", i % 2 ? "sad" : "angry", i < 2, emotion_vector(i % 2 ? "sad" : "angry", rng, 0)});
  }
  REQUIRE_THROWS_WITH(crossdb_grid({a, b}, {}), ContainsSubstring("label set"));
  REQUIRE_THROWS_AS(crossdb_grid({a}, {}), ValidationError);
}

// ---------------------------------------------------------------- config

TEST_CASE("settings file", "[pipeline][config]") {
  const auto cfg = parse_config(R"(# comment
[features]
f0_min_hz = 75      # inline comment
window = "hamming"
mel_filters = 30

[splice]
seg_min_s = 0.5
seg_max_s = 1.0

[screening]
alpha = 0.01
priors = "proportional"
ridge = true

[crossdb]
c = 0.5
iterations = 500
)");
  REQUIRE(cfg.features.pitch.fmin_hz == 75.0);
  REQUIRE(cfg.features.window == WindowKind::kHamming);
  REQUIRE(cfg.features.mel.n_filters == 30);
  REQUIRE(cfg.splice.seg_min_s == 0.5);
  REQUIRE(cfg.screening.alpha == 0.01);
  REQUIRE(cfg.screening.lda.priors == stats::Priors::kProportional);
  REQUIRE(cfg.screening.lda.ridge);
  REQUIRE(cfg.svm.c == 0.5);
  REQUIRE(cfg.svm.iterations == 500);
  REQUIRE(cfg.robustness_threshold == 0.95);

  REQUIRE_THROWS_WITH(parse_config("[features]\nbogus = 1\n"), ContainsSubstring("unknown key 'features.bogus'"));
  REQUIRE_THROWS_AS(parse_config("[splice]\nseg_min_s = 2\nseg_max_s = 1\n"), ValidationError);
  REQUIRE_THROWS_AS(parse_config("[crossdb]\niterations = 2.5\n"), ValidationError);
  REQUIRE_THROWS_AS(parse_config("[screening]\nalpha = lots\n"), ValidationError);
  REQUIRE_THROWS_AS(load_config("/nonexistent.toml"), IoError);
}
