// vocalrisk/features.hpp

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

// Utterance-level acoustic functionals. Every functional is the arithmetic
// mean of a frame-level descriptor over a frame mask:
//
//   f0, semitones, slopes, logRelF0-H1-H2, HNR   voiced frames
//   alpha ratio                                  unvoiced, non-silent frames
//   mfcc1..4                                     non-silent frames
//
// Silence is relative: a frame is silent when its energy is more than
// `silence_db` below the loudest frame, so the masks do not move with gain.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vocalrisk/audio.hpp"
#include "vocalrisk/errors.hpp"
#include "vocalrisk/pitch.hpp"
#include "vocalrisk/spectral.hpp"
#include "vocalrisk/spectrum.hpp"
#include "vocalrisk/voice_quality.hpp"

namespace vocalrisk {

enum class Feature : std::size_t {
  kF0HzMean,
  kF0SemitoneMean,
  kMfcc1Mean,
  kMfcc2Mean,
  kMfcc3Mean,
  kMfcc4Mean,
  kLogRelF0H1H2Mean,
  kSlopeV0_500Mean,
  kSlopeV500_1500Mean,
  kAlphaRatioUvMean,
  kJitterLocalMean,
  kShimmerLocalMean,
  kHnrMean,
  kVoicedFraction,
  kDurationS,
  kCount
};

inline constexpr std::size_t kFeatureCount = static_cast<std::size_t>(Feature::kCount);

struct FeatureInfo {
  std::string_view name;
  std::string_view unit;
};

inline constexpr std::array<FeatureInfo, kFeatureCount> kFeatureInfo = {{
    {"f0_hz_mean", "Hz"},
    {"f0_semitone_mean", "semitones re 27.5 Hz"},
    {"mfcc1_mean", ""},
    {"mfcc2_mean", ""},
    {"mfcc3_mean", ""},
    {"mfcc4_mean", ""},
    {"logRelF0_H1_H2_mean", "dB"},
    {"slope_v0_500_mean", "dB/Hz"},
    {"slope_v500_1500_mean", "dB/Hz"},
    {"alpha_ratio_uv_mean", "dB"},
    {"jitter_local_mean", "ratio"},
    {"shimmer_local_mean", "ratio"},
    {"hnr_mean", "dB"},
    {"voiced_fraction", "ratio"},
    {"duration_s", "s"},
}};

inline constexpr std::string_view feature_name(Feature f) {
  return kFeatureInfo[static_cast<std::size_t>(f)].name;
}

inline std::optional<Feature> feature_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    if (kFeatureInfo[i].name == name) return static_cast<Feature>(i);
  return std::nullopt;
}

/// Features that differ between risk groups in the screening study; these
/// are the ones whose splice robustness matters.
inline constexpr std::array<Feature, 7> kRiskFeatures = {
    Feature::kF0HzMean,         Feature::kF0SemitoneMean,   Feature::kMfcc2Mean,
    Feature::kMfcc4Mean,        Feature::kLogRelF0H1H2Mean, Feature::kSlopeV0_500Mean,
    Feature::kAlphaRatioUvMean,
};

/// Acoustic features entering the group comparison (everything except the
/// bookkeeping values voiced_fraction and duration_s).
inline constexpr std::array<Feature, 13> kAcousticFeatures = {
    Feature::kF0HzMean,          Feature::kF0SemitoneMean,    Feature::kMfcc1Mean,
    Feature::kMfcc2Mean,         Feature::kMfcc3Mean,         Feature::kMfcc4Mean,
    Feature::kLogRelF0H1H2Mean,  Feature::kSlopeV0_500Mean,   Feature::kSlopeV500_1500Mean,
    Feature::kAlphaRatioUvMean,  Feature::kJitterLocalMean,   Feature::kShimmerLocalMean,
    Feature::kHnrMean,
};

/// Named functionals for one recording. Absent values are std::nullopt and
/// carry a flag explaining why; they are never silently zero.
struct FeatureVector {
  std::array<std::optional<double>, kFeatureCount> values{};
  std::vector<std::string> flags;

  std::optional<double>& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  const std::optional<double>& operator[](Feature f) const {
    return values[static_cast<std::size_t>(f)];
  }
  std::optional<double> get(std::string_view name) const {
    const auto f = feature_from_name(name);
    if (!f) throw ValidationError("unknown feature '" + std::string(name) + "'");
    return (*this)[*f];
  }
  bool has(Feature f) const { return (*this)[f].has_value(); }
};

struct FeatureConfig {
  double frame_length_s = 0.025;
  double hop_s = 0.010;
  WindowKind window = WindowKind::kHann;
  double pitch_frame_length_s = 0.060;
  PitchConfig pitch;
  MelConfig mel;
  double silence_db = 50.0;
  int harmonic_zero_pad = 4;  // FFT size multiplier for harmonic peak picking
  double min_duration_s = 1.0;

  void validate() const {
    if (!(hop_s > 0.0) || hop_s > frame_length_s)
      throw ValidationError("feature config: need 0 < hop <= frame length");
    if (pitch_frame_length_s < hop_s)
      throw ValidationError("feature config: pitch frame shorter than hop");
    if (!(silence_db > 0.0)) throw ValidationError("feature config: silence_db must be positive");
    if (harmonic_zero_pad < 1) throw ValidationError("feature config: harmonic_zero_pad must be >= 1");
  }
};

/// Everything computed for one recording; the contour is kept for callers
/// that need frame-level detail.
struct Analysis {
  FeatureVector features;
  F0Contour contour;
};

/// Least-squares slope (Hz/s) of F0 against time over voiced frames. A
/// dynamic descriptor: it depends on the temporal order of the recording.
inline std::optional<double> f0_linear_slope(const F0Contour& contour) {
  double st = 0.0, sf = 0.0, stt = 0.0, stf = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < contour.size(); ++i) {
    if (!contour.voiced(i)) continue;
    const double t = contour.center_time(i);
    const double f = contour.f0_hz[i];
    st += t;
    sf += f;
    stt += t * t;
    stf += t * f;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double dn = static_cast<double>(n);
  const double var = stt - st * st / dn;
  if (!(var > 0.0)) return std::nullopt;
  return (stf - st * sf / dn) / var;
}

namespace detail {

struct RunningMean {
  double sum = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

}  // namespace detail

inline Analysis analyze(const AudioBuffer& buffer, const FeatureConfig& cfg = {}) {
  cfg.validate();
  require_feature_sample_rate(buffer);
  if (buffer.duration_s() < cfg.min_duration_s)
    throw ValidationError("recording too short: " + std::to_string(buffer.duration_s()) +
                          " s < " + std::to_string(cfg.min_duration_s) + " s");

  const int fs = buffer.sample_rate();
  Analysis out;
  FeatureVector& fv = out.features;
  fv[Feature::kDurationS] = buffer.duration_s();

  // pitch on unwindowed long frames
  const FrameSequence pitch_frames =
      frame_signal(buffer, cfg.pitch_frame_length_s, cfg.hop_s, WindowKind::kRectangular);
  if (pitch_frames.empty()) throw ValidationError("recording shorter than one pitch frame");
  out.contour = detect_f0(pitch_frames, cfg.pitch);
  const F0Contour& contour = out.contour;
  fv[Feature::kVoicedFraction] = contour.voiced_fraction();

  detail::RunningMean f0_hz, f0_st;
  for (std::size_t j = 0; j < contour.size(); ++j) {
    if (!contour.voiced(j)) continue;
    f0_hz.add(contour.f0_hz[j]);
    f0_st.add(f0_semitones(contour.f0_hz[j]));
  }
  fv[Feature::kF0HzMean] = f0_hz.mean();
  fv[Feature::kF0SemitoneMean] = f0_st.mean();

  // short-frame spectral descriptors
  const FrameSequence frames = frame_signal(buffer, cfg.frame_length_s, cfg.hop_s, cfg.window);
  const std::size_t fft_size = next_power_of_two(frames.frame_length);
  const MelFilterbank bank(cfg.mel, fft_size, fs);

  std::vector<double> energy(frames.size(), 0.0);
  double max_energy = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    for (double v : frames.frames[i]) energy[i] += v * v;
    max_energy = std::max(max_energy, energy[i]);
  }
  const double gate = max_energy * std::pow(10.0, -cfg.silence_db / 10.0);

  auto pitch_frame_for = [&](std::size_t i) {
    const double t = frames.center_time(i);
    const long j = std::lround((t - 0.5 * contour.frame_length_s) / contour.hop_s);
    return static_cast<std::size_t>(std::clamp(j, 0L, static_cast<long>(contour.size()) - 1));
  };

  std::array<detail::RunningMean, 4> mfcc_mean;
  detail::RunningMean slope_low, slope_mid, alpha;
  std::size_t alpha_empty = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!(energy[i] > 0.0) || energy[i] < gate) continue;
    const Spectrum spec = magnitude_spectrum(frames.frames[i], fft_size, fs);
    const auto c = mfcc(spec, bank);
    for (std::size_t k = 0; k < mfcc_mean.size() && k < c.size(); ++k) mfcc_mean[k].add(c[k]);

    if (contour.voiced(pitch_frame_for(i))) {
      slope_low.add(spectral_slope_band(spec, 0.0, 500.0));
      slope_mid.add(spectral_slope_band(spec, 500.0, 1500.0));
    } else {
      try {
        const AlphaRatio ar = alpha_ratio(spec);
        if (ar.band_empty) ++alpha_empty;
        alpha.add(ar.db);
      } catch (const ValidationError&) {
        // frame without low-band energy: ratio undefined, skip it
      }
    }
  }
  fv[Feature::kMfcc1Mean] = mfcc_mean[0].mean();
  fv[Feature::kMfcc2Mean] = mfcc_mean[1].mean();
  fv[Feature::kMfcc3Mean] = mfcc_mean[2].mean();
  fv[Feature::kMfcc4Mean] = mfcc_mean[3].mean();
  fv[Feature::kSlopeV0_500Mean] = slope_low.mean();
  fv[Feature::kSlopeV500_1500Mean] = slope_mid.mean();
  fv[Feature::kAlphaRatioUvMean] = alpha.mean();
  if (alpha_empty > 0)
    fv.flags.push_back("alpha_ratio_band_empty_frames=" + std::to_string(alpha_empty));
  if (!alpha.mean()) fv.flags.push_back("no_unvoiced_frames");

  // harmonic levels on long Hann frames, referenced to the frame's own level
  detail::RunningMean log_rel;
  if (contour.voiced_count() > 0) {
    const FrameSequence long_frames =
        frame_signal(buffer, cfg.pitch_frame_length_s, cfg.hop_s, WindowKind::kHann);
    const std::size_t long_fft =
        next_power_of_two(long_frames.frame_length) * static_cast<std::size_t>(cfg.harmonic_zero_pad);
    for (std::size_t j = 0; j < contour.size() && j < long_frames.size(); ++j) {
      if (!contour.voiced(j)) continue;
      Spectrum spec = magnitude_spectrum(long_frames.frames[j], long_fft, fs);
      const double level = spec.rss_level();
      if (!(level > 0.0)) continue;
      spec.reference = level;
      log_rel.add(log_rel_f0_h1_h2(spec, contour.f0_hz[j]));
    }
  }
  fv[Feature::kLogRelF0H1H2Mean] = log_rel.mean();

  VoiceQualityConfig vq_cfg;
  vq_cfg.fmin_hz = cfg.pitch.fmin_hz;
  vq_cfg.fmax_hz = cfg.pitch.fmax_hz;
  const VoiceQuality vq = jitter_shimmer_hnr(buffer, contour, vq_cfg);
  fv[Feature::kJitterLocalMean] = vq.jitter_local;
  fv[Feature::kShimmerLocalMean] = vq.shimmer_local;
  fv[Feature::kHnrMean] = vq.hnr_db;
  if (!vq.jitter_local) fv.flags.push_back("insufficient_voiced_periods");

  if (contour.voiced_count() == 0) fv.flags.push_back("no_voiced_frames");
  return out;
}

inline FeatureVector extract_feature_vector(const AudioBuffer& buffer, const FeatureConfig& cfg = {}) {
  return analyze(buffer, cfg).features;
}

}  // namespace vocalrisk
