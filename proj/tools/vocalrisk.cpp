// tools/vocalrisk.cpp

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

// Command line front end.
//
//   vocalrisk splice     --in a.wav --out b.wav [--plan-out plan.json]
//   vocalrisk extract    --in <wav|dir> --out features.csv
//   vocalrisk robustness --corpus <dir> --out report.json
//   vocalrisk screen     --manifest cohort.csv --out report.json
//   vocalrisk crossdb    --corpus a.csv --corpus b.csv --out grid.json
//
// Global: --seed, --jobs, --config. Exit codes: 0 ok, 1 invalid input,
// 2 I/O failure, 3 degenerate statistics.

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "vocalrisk/vocalrisk.hpp"

namespace {

using namespace vocalrisk;

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string config;
};

AppConfig load(const Globals& g) { return g.config.empty() ? AppConfig{} : load_config(g.config); }

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  if (path.empty() || path == "-")
    std::cout << j.dump(2) << "\n";
  else
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vocalrisk: speech splicing, acoustic features and risk-screening statistics"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
  app.add_option("--config", g.config, "Settings file (TOML subset)");

  // splice
  auto* sp = app.add_subcommand("splice", "Cut a recording into random segments and shuffle them");
  sp->fallthrough();
  std::string sp_in, sp_out, sp_plan;
  std::optional<double> sp_min, sp_max, sp_xf;
  sp->add_option("--in", sp_in, "Input WAV")->required();
  sp->add_option("--out", sp_out, "Output WAV")->required();
  sp->add_option("--seg-min", sp_min, "Shortest segment in seconds");
  sp->add_option("--seg-max", sp_max, "Longest segment in seconds");
  sp->add_option("--crossfade", sp_xf, "Crossfade in seconds");
  sp->add_option("--plan-out", sp_plan, "Write the splice plan as JSON");

  // extract
  auto* ex = app.add_subcommand("extract", "Extract acoustic features");
  ex->fallthrough();
  std::string ex_in, ex_out;
  ex->add_option("--in", ex_in, "WAV file or directory of WAV files")->required();
  ex->add_option("--out", ex_out, "Output CSV (- for stdout)")->required();

  // robustness
  auto* rb = app.add_subcommand("robustness", "Feature agreement before and after splicing");
  rb->fallthrough();
  std::string rb_corpus, rb_out;
  std::optional<double> rb_threshold;
  bool rb_all = false;
  rb->add_option("--corpus", rb_corpus, "Directory of WAV files")->required();
  rb->add_option("--threshold", rb_threshold, "Concordance threshold");
  rb->add_option("--out", rb_out, "Report JSON (- for stdout)");
  rb->add_flag("--all-features", rb_all, "Report every acoustic feature");

  // screen
  auto* sc = app.add_subcommand("screen", "Risk-group screening statistics over a cohort manifest");
  sc->fallthrough();
  std::string sc_manifest, sc_out, sc_text, sc_csv, sc_priors;
  std::optional<double> sc_alpha, sc_enter, sc_remove;
  bool sc_mancova = false, sc_ridge = false, sc_splice = false;
  sc->add_option("--manifest", sc_manifest, "Cohort manifest CSV")->required();
  sc->add_option("--out", sc_out, "Report JSON (- for stdout)");
  sc->add_option("--text-out", sc_text, "Human-readable report");
  sc->add_option("--csv-out", sc_csv, "Group-comparison table as CSV");
  sc->add_option("--priors", sc_priors, "Discriminant priors: equal or proportional");
  sc->add_option("--alpha", sc_alpha, "Threshold for entering the discriminant analysis");
  sc->add_option("--p-enter", sc_enter, "Stepwise entry significance");
  sc->add_option("--p-remove", sc_remove, "Stepwise removal significance");
  sc->add_flag("--mancova", sc_mancova, "Also run the omnibus multivariate test");
  sc->add_flag("--ridge", sc_ridge, "Regularize a singular pooled covariance");
  sc->add_flag("--splice", sc_splice, "Splice recordings before extraction");

  // crossdb
  auto* cd = app.add_subcommand("crossdb", "Cross-corpus emotion classification grid");
  cd->fallthrough();
  std::vector<std::string> cd_corpora;
  std::string cd_out;
  std::optional<double> cd_c;
  cd->add_option("--corpus", cd_corpora, "Corpus manifest CSV (audio_path,label[,split]); repeat")->required();
  cd->add_option("--out", cd_out, "Grid JSON (- for stdout)");
  cd->add_option("--c", cd_c, "Misclassification cost");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::kValidation);
  }

  try {
    AppConfig cfg = load(g);
    if (*sp) {
      SpliceConfig s = cfg.splice;
      if (sp_min) s.seg_min_s = *sp_min;
      if (sp_max) s.seg_max_s = *sp_max;
      if (sp_xf) s.crossfade_s = *sp_xf;
      s.seed = g.seed;
      const SplicePlan plan = splice_file(sp_in, sp_out, s);
      if (!sp_plan.empty()) write_json(sp_plan, to_json(plan));
    } else if (*ex) {
      std::vector<std::filesystem::path> files;
      if (std::filesystem::is_directory(ex_in))
        files = list_wav_files(ex_in);
      else
        files.push_back(ex_in);
      std::vector<std::pair<std::string, FeatureVector>> rows(files.size());
      std::vector<std::string> errors(files.size());
      parallel_for(files.size(), g.jobs, [&](std::size_t i) {
        rows[i].first = files[i].filename().string();
        try {
          rows[i].second = extract_feature_vector(load_wav(files[i]), cfg.features);
        } catch (const Error& e) {
          if (files.size() == 1) throw;
          errors[i] = e.what();
        }
      });
      std::vector<std::pair<std::string, FeatureVector>> ok;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (errors[i].empty())
          ok.push_back(std::move(rows[i]));
        else
          std::cerr << "warning: " << rows[i].first << " skipped: " << errors[i] << "\n";
      }
      const std::string csv = feature_table_csv(ok);
      if (ex_out == "-")
        std::cout << csv;
      else
        write_text_file(ex_out, csv);
    } else if (*rb) {
      RobustnessOptions opt;
      opt.splice = cfg.splice;
      opt.splice.seed = g.seed;
      opt.features = cfg.features;
      opt.threshold = rb_threshold.value_or(cfg.robustness_threshold);
      opt.all_features = rb_all;
      opt.jobs = g.jobs;
      const CccReport report = robustness_report(std::filesystem::path(rb_corpus), opt);
      write_json(rb_out, to_json(report));
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    } else if (*sc) {
      ScreeningConfig scfg = cfg.screening;
      if (!sc_priors.empty()) scfg.lda.priors = stats::parse_priors(sc_priors);
      if (sc_alpha) scfg.alpha = *sc_alpha;
      if (sc_enter) scfg.stepwise.p_enter = *sc_enter;
      if (sc_remove) scfg.stepwise.p_remove = *sc_remove;
      if (sc_mancova) scfg.mancova = true;
      if (sc_ridge) scfg.lda.ridge = true;
      CohortOptions co;
      co.features = cfg.features;
      co.jobs = g.jobs;
      if (sc_splice) {
        co.splice = cfg.splice;
        co.splice->seed = g.seed;
      }
      const CohortTable cohort = build_cohort(load_manifest(sc_manifest), co);
      const AnalysisReport report = run_screening(cohort, scfg);
      Json j = to_json(report);
      j["seed"] = g.seed;
      write_json(sc_out, j);
      if (!sc_text.empty()) emit_report(report, ReportFormat::kText, sc_text);
      if (!sc_csv.empty()) emit_report(report, ReportFormat::kCsv, sc_csv);
    } else if (*cd) {
      CrossDbOptions opt;
      opt.features = cfg.features;
      opt.svm = cfg.svm;
      if (cd_c) opt.svm.c = *cd_c;
      opt.jobs = g.jobs;
      opt.seed = g.seed;
      opt.test_fraction = cfg.crossdb_test_fraction;
      std::vector<std::filesystem::path> manifests(cd_corpora.begin(), cd_corpora.end());
      write_json(cd_out, to_json(run_crossdb(manifests, opt)));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kValidation);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kIo);
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate statistics: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kDegenerate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kValidation);
  }
  return static_cast<int>(ExitCode::kSuccess);
}
