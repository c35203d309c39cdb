// tests/test_features.cpp

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

#include <cmath>
#include <numbers>

#include "synth.hpp"
#include "vocalrisk/features.hpp"

using namespace vocalrisk;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

AudioBuffer scaled(const AudioBuffer& x, double g) {
  std::vector<double> y(x.samples().begin(), x.samples().end());
  for (double& v : y) v *= g;
  return AudioBuffer(std::move(y), x.sample_rate());
}

// damped resonator response to a pulse train; each pulse has decayed before the next
AudioBuffer ringing_pulses(const std::vector<std::size_t>& periods, const std::vector<double>& amps,
                           double seconds, int fs) {
  const auto src = synth::pulse_train_samples(periods, seconds, fs, 0.8, amps);
  synth::Resonator r;
  r.set(900.0, 500.0, fs);
  std::vector<double> y(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) y[i] = r(src[i]);
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  for (double& v : y) v *= 0.7 / peak;
  return AudioBuffer(std::move(y), fs);
}

}  // namespace

TEST_CASE("feature names are canonical and unique", "[features]") {
  REQUIRE(kFeatureCount == 15);
  REQUIRE(feature_name(Feature::kF0HzMean) == "f0_hz_mean");
  REQUIRE(feature_name(Feature::kLogRelF0H1H2Mean) == "logRelF0_H1_H2_mean");
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto f = static_cast<Feature>(i);
    REQUIRE(feature_from_name(feature_name(f)) == f);
  }
  REQUIRE_FALSE(feature_from_name("nope").has_value());
  FeatureVector fv;
  REQUIRE_THROWS_AS(fv.get("nope"), ValidationError);
}

TEST_CASE("semitone scale", "[features][pitch]") {
  REQUIRE_THAT(f0_semitones(220.0), WithinAbs(36.0, 1e-12));
  REQUIRE_THAT(f0_semitones(27.5), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(f0_semitones(440.0) - f0_semitones(220.0), WithinAbs(12.0, 1e-12));
  REQUIRE_THROWS_AS(f0_semitones(0.0), ValidationError);
}

TEST_CASE("F0 of pure and harmonic tones", "[features][pitch]") {
  for (double hz = 100.0; hz <= 400.0; hz += 25.0) {
    CAPTURE(hz);
    const auto sine = extract_feature_vector(synth::sine(hz, 1.5, 16000));
    REQUIRE(sine.has(Feature::kF0HzMean));
    REQUIRE_THAT(*sine[Feature::kF0HzMean], WithinRel(hz, 0.02));
    REQUIRE(*sine[Feature::kVoicedFraction] > 0.9);
    // rich spectrum: the fundamental must win over its harmonics
    const auto saw = extract_feature_vector(synth::sawtooth(hz, 1.5, 16000));
    REQUIRE_THAT(*saw[Feature::kF0HzMean], WithinRel(hz, 0.02));
  }
  const auto fv = extract_feature_vector(synth::sine(220.0, 1.5, 16000));
  REQUIRE_THAT(*fv[Feature::kF0SemitoneMean], WithinAbs(36.0, 0.02));
}

TEST_CASE("F0 at 44.1 kHz", "[features][pitch]") {
  const auto fv = extract_feature_vector(synth::sine(150.0, 1.2, 44100));
  REQUIRE_THAT(*fv[Feature::kF0HzMean], WithinRel(150.0, 0.02));
}

TEST_CASE("noise is unvoiced", "[features][pitch]") {
  const auto fv = extract_feature_vector(synth::white_noise(2.0, 16000, 4));
  REQUIRE(*fv[Feature::kVoicedFraction] < 0.05);
}

TEST_CASE("MFCCs are gain invariant", "[features][mfcc]") {
  const auto x = synth::utterance(synth::corpus_voice(3, 2.0));
  const auto a = extract_feature_vector(x);
  const auto b = extract_feature_vector(scaled(x, 0.25));
  for (Feature f : {Feature::kMfcc1Mean, Feature::kMfcc2Mean, Feature::kMfcc3Mean, Feature::kMfcc4Mean}) {
    CAPTURE(feature_name(f));
    REQUIRE(a.has(f));
    REQUIRE_THAT(*b[f], WithinAbs(*a[f], 1e-6));
  }
  // the same holds for the self-referenced harmonic measure
  REQUIRE_THAT(*b[Feature::kLogRelF0H1H2Mean], WithinAbs(*a[Feature::kLogRelF0H1H2Mean], 1e-6));
}

TEST_CASE("mel scale and DCT", "[features][mfcc]") {
  REQUIRE_THAT(mel_to_hz(hz_to_mel(1234.5)), WithinRel(1234.5, 1e-12));
  REQUIRE_THAT(hz_to_mel(1000.0), WithinAbs(1000.0, 0.1));
  // flat log energies have no cepstral shape
  const auto c = mfcc_from_energies(std::vector<double>(26, 3.0), 4);
  REQUIRE(c.size() == 4);
  for (double v : c) REQUIRE_THAT(v, WithinAbs(0.0, 1e-12));
}

TEST_CASE("alpha ratio of a flat spectrum", "[features][spectral]") {
  // exact: 10 log10(4000 / 950)
  const double expected = 10.0 * std::log10(4000.0 / 950.0);
  REQUIRE_THAT(expected, WithinAbs(6.24, 0.005));
  Spectrum s;
  s.sample_rate = 16000;
  s.fft_size = 16000;  // 1 Hz bins; only arithmetic is exercised here
  s.magnitudes.assign(8001, 1.0);
  REQUIRE_THAT(alpha_ratio(s).db, WithinAbs(10.0 * std::log10(4001.0 / 950.0), 1e-12));

  const auto fv = extract_feature_vector(synth::white_noise(3.0, 16000, 17, 0.2));
  REQUIRE(fv.has(Feature::kAlphaRatioUvMean));
  REQUIRE_THAT(*fv[Feature::kAlphaRatioUvMean], WithinAbs(6.24, 0.3));
}

TEST_CASE("alpha ratio edge cases", "[features][spectral]") {
  Spectrum s;
  s.sample_rate = 8000;
  s.fft_size = 512;
  s.magnitudes.assign(257, 1.0);
  REQUIRE_THROWS_AS(alpha_ratio(s), ValidationError);
  s.sample_rate = 16000;
  s.magnitudes.assign(257, 0.0);
  REQUIRE_THROWS_AS(alpha_ratio(s), ValidationError);
  s.magnitudes[10] = 1.0;  // 312.5 Hz only
  const auto ar = alpha_ratio(s);
  REQUIRE(ar.band_empty);
  REQUIRE(ar.db == kDbFloor);
}

TEST_CASE("band slope of a constructed dB ramp", "[features][spectral]") {
  Spectrum s;
  s.sample_rate = 16000;
  s.fft_size = 1024;
  s.magnitudes.resize(513);
  for (std::size_t k = 0; k < s.bins(); ++k)
    s.magnitudes[k] = std::pow(10.0, (0.02 * s.frequency(k) - 40.0) / 20.0);
  REQUIRE_THAT(spectral_slope_band(s, 0.0, 500.0), WithinAbs(0.02, 1e-6));
  REQUIRE_THAT(spectral_slope_band(s, 500.0, 1500.0), WithinAbs(0.02, 1e-6));
  // gain shifts every level equally
  for (double& m : s.magnitudes) m *= 7.0;
  REQUIRE_THAT(spectral_slope_band(s, 500.0, 1500.0), WithinAbs(0.02, 1e-6));
  REQUIRE_THROWS_AS(spectral_slope_band(s, 0.0, 9000.0), ValidationError);
  REQUIRE_THROWS_AS(spectral_slope_band(s, 100.0, 120.0), ValidationError);
}

TEST_CASE("harmonic levels", "[features][spectral]") {
  // f0 = 250 Hz; the fundamental and its next two harmonics at 1, 0.5, 0.1
  const int fs = 16000;
  const auto x = synth::tones({{250.0, 0.5}, {500.0, 0.25}, {750.0, 0.05}}, 0.064, fs);
  const auto w = make_window(WindowKind::kHann, 1024);
  std::vector<double> frame(1024);
  for (std::size_t i = 0; i < 1024; ++i) frame[i] = x.samples()[i] * w[i];
  const Spectrum s = magnitude_spectrum(frame, 4096, fs);
  const double h0 = harmonic_amplitude(s, 250.0, 0);
  const double h1 = harmonic_amplitude(s, 250.0, 1);
  const double h2 = harmonic_amplitude(s, 250.0, 2);
  REQUIRE_THAT(h1 - h0, WithinAbs(20.0 * std::log10(0.5), 0.05));
  REQUIRE_THAT(h2 - h1, WithinAbs(20.0 * std::log10(0.2), 0.05));
  REQUIRE_THAT(log_rel_f0_h1_h2(s, 250.0), WithinAbs((h1 - h2) - h0, 1e-12));
  REQUIRE_THROWS_AS(harmonic_amplitude(s, 3000.0, 2), ValidationError);
  REQUIRE_THROWS_AS(harmonic_amplitude(s, -1.0, 0), ValidationError);
}

TEST_CASE("jitter and shimmer", "[features][voice]") {
  const int fs = 16000;
  SECTION("steady pulses") {
    const auto x = ringing_pulses({128}, {1.0}, 2.0, fs);
    const auto fv = extract_feature_vector(x);
    REQUIRE_THAT(*fv[Feature::kF0HzMean], WithinRel(125.0, 0.02));
    REQUIRE(fv.has(Feature::kJitterLocalMean));
    REQUIRE(*fv[Feature::kJitterLocalMean] < 1e-3);
    REQUIRE(*fv[Feature::kShimmerLocalMean] < 1e-2);
    REQUIRE(*fv[Feature::kHnrMean] > 20.0);
  }
  SECTION("alternating amplitudes") {
    // |a1 - a0| / mean(a) = 0.2 / 0.9
    const auto x = ringing_pulses({128}, {1.0, 0.8}, 2.0, fs);
    const auto fv = extract_feature_vector(x);
    REQUIRE_THAT(*fv[Feature::kShimmerLocalMean], WithinRel(0.2 / 0.9, 0.05));
    REQUIRE(*fv[Feature::kJitterLocalMean] < 1e-3);
  }
  SECTION("more perturbation reads higher") {
    auto p = synth::corpus_voice(5, 3.0);
    p.jitter = 0.001;
    p.shimmer = 0.01;
    const auto calm = extract_feature_vector(synth::utterance(p));
    p.jitter = 0.02;
    p.shimmer = 0.12;
    const auto rough = extract_feature_vector(synth::utterance(p));
    REQUIRE(*rough[Feature::kJitterLocalMean] > *calm[Feature::kJitterLocalMean]);
    REQUIRE(*rough[Feature::kShimmerLocalMean] > *calm[Feature::kShimmerLocalMean]);
  }
}

TEST_CASE("synthetic utterance yields every feature", "[features]") {
  const auto x = synth::utterance(synth::corpus_voice(0));
  const auto a = analyze(x);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    CAPTURE(feature_name(static_cast<Feature>(i)));
    REQUIRE(a.features.values[i].has_value());
    REQUIRE(std::isfinite(*a.features.values[i]));
  }
  REQUIRE_THAT(*a.features[Feature::kDurationS], WithinAbs(4.0, 1e-9));
  const double vf = *a.features[Feature::kVoicedFraction];
  REQUIRE(vf > 0.2);
  REQUIRE(vf < 0.95);
  // the analysis is a pure function of its input
  const auto b = analyze(x);
  for (std::size_t i = 0; i < kFeatureCount; ++i) REQUIRE(a.features.values[i] == b.features.values[i]);
}

TEST_CASE("missing values carry flags", "[features]") {
  const auto fv = extract_feature_vector(synth::white_noise(1.5, 16000, 9));
  REQUIRE_FALSE(fv.has(Feature::kF0HzMean));
  REQUIRE_FALSE(fv.has(Feature::kJitterLocalMean));
  REQUIRE(std::find(fv.flags.begin(), fv.flags.end(), "no_voiced_frames") != fv.flags.end());

  const auto tone = extract_feature_vector(synth::sine(200.0, 1.5, 16000));
  REQUIRE(std::find(tone.flags.begin(), tone.flags.end(), "no_unvoiced_frames") != tone.flags.end());
  REQUIRE_FALSE(tone.has(Feature::kAlphaRatioUvMean));
}

TEST_CASE("extraction preconditions", "[features]") {
  REQUIRE_THROWS_WITH(extract_feature_vector(synth::sine(200.0, 0.5, 16000)),
                      ContainsSubstring("too short"));
  REQUIRE_THROWS_AS(extract_feature_vector(synth::sine(200.0, 1.5, 8000)), ValidationError);
  FeatureConfig cfg;
  cfg.hop_s = 0.05;
  REQUIRE_THROWS_AS(extract_feature_vector(synth::sine(200.0, 1.5, 16000), cfg), ValidationError);
}

TEST_CASE("F0 slope follows the declination", "[features][pitch]") {
  auto p = synth::corpus_voice(2, 4.0);
  p.f0_slope_hz_per_s = -20.0;
  const auto a = analyze(synth::utterance(p));
  const auto slope = f0_linear_slope(a.contour);
  REQUIRE(slope.has_value());
  REQUIRE_THAT(*slope, WithinAbs(-20.0, 6.0));
}
