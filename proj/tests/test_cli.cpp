// tests/test_cli.cpp

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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "synth.hpp"
#include "vocalrisk/vocalrisk.hpp"

using namespace vocalrisk;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "vocalrisk_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + VOCALRISK_CLI + "\" " + args + " >" +
                          (work_dir() / "stdout.txt").string() + " 2>" + (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("usage errors exit with 1", "[cli]") {
  REQUIRE(run("") == 1);
  REQUIRE(run("frobnicate") == 1);
  REQUIRE(run("splice --in only.wav") == 1);
  REQUIRE(run("--jobs 0 extract --in x --out y") == 1);
  REQUIRE(run("--help") == 0);
}

TEST_CASE("splice subcommand", "[cli]") {
  const auto in = work_dir() / "in.wav";
  write_wav(in, synth::utterance(synth::corpus_voice(0, 5.0)));
  const auto out1 = work_dir() / "out1.wav", out2 = work_dir() / "out2.wav", plan = work_dir() / "plan.json";
  REQUIRE(run("--seed 7 splice --in " + q(in) + " --out " + q(out1) + " --plan-out " + q(plan)) == 0);
  REQUIRE(run("splice --seed 7 --in " + q(in) + " --out " + q(out2)) == 0);
  REQUIRE(read_text_file(out1) == read_text_file(out2));
  const auto j = nlohmann::json::parse(read_text_file(plan));
  REQUIRE(j["config"]["seed"] == 7);
  REQUIRE(j["boundaries"].back() == 80000);

  REQUIRE(run("splice --in " + q(work_dir() / "missing.wav") + " --out " + q(out1)) == 2);
  REQUIRE(run("splice --seg-min 10 --seg-max 12 --in " + q(in) + " --out " + q(out1)) == 1);
  REQUIRE_THAT(read_text_file(work_dir() / "stderr.txt"), ContainsSubstring("too short"));
}

TEST_CASE("extract subcommand", "[cli]") {
  const auto dir = work_dir() / "extract";
  fs::create_directories(dir);
  write_wav(dir / "a.wav", synth::utterance(synth::corpus_voice(1, 2.0)));
  write_wav(dir / "b.wav", synth::sine(200.0, 1.5, 16000));
  write_text_file(dir / "broken.wav", "not a wav");
  const auto csv = work_dir() / "features.csv";
  REQUIRE(run("--jobs 2 extract --in " + q(dir) + " --out " + q(csv)) == 0);
  const auto rows = parse_csv(read_text_file(csv));
  REQUIRE(rows.size() == 3);
  REQUIRE(rows[1][0] == "a.wav");
  REQUIRE_THAT(read_text_file(work_dir() / "stderr.txt"), ContainsSubstring("broken.wav"));
  REQUIRE(run("extract --in " + q(dir / "broken.wav") + " --out -") == 2);
}

TEST_CASE("config and screening errors map to exit codes", "[cli]") {
  const auto cfg = work_dir() / "bad.toml";
  write_text_file(cfg, "[features]\nnope = 1\n");
  REQUIRE(run("--config " + q(cfg) + " extract --in x.wav --out -") == 1);
  REQUIRE(run("--config " + q(work_dir() / "none.toml") + " extract --in x.wav --out -") == 2);

  // a single risk group is a degenerate analysis
  const auto dir = work_dir() / "screen";
  fs::create_directories(dir);
  std::string text =
      "participant_id,gender,country,phq8,gad7,wemwbs,audio_path,int_anxiety,int_sadness,int_shame,"
      "int_amusement,int_joy,int_pleasure,int_7,int_8,int_9,int_10,int_11,int_12\n";
  for (int i = 0; i < 4; ++i) {
    write_wav(dir / ("p" + std::to_string(i) + ".wav"), synth::utterance(synth::corpus_voice(i, 1.5)));
    text += "p" + std::to_string(i) + ",f,UK,3,2,50,p" + std::to_string(i) + ".wav,1,1,1,1,1,1,1,1,1,1,1,1\n";
  }
  write_text_file(dir / "m.csv", text);
  REQUIRE(run("screen --manifest " + q(dir / "m.csv") + " --out -") == 3);
  REQUIRE(run("screen --manifest " + q(dir / "m.csv") + " --priors flat") == 1);
}
