// vocalrisk/pitch.hpp

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

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vocalrisk/audio.hpp"
#include "vocalrisk/errors.hpp"
#include "vocalrisk/spectrum.hpp"

namespace vocalrisk {

/// Reference pitch of the semitone scale (A0).
inline constexpr double kSemitoneReferenceHz = 27.5;

inline double f0_semitones(double f0_hz) {
  if (!(f0_hz > 0.0))
    throw ValidationError("semitone conversion needs a positive frequency, got " +
                          std::to_string(f0_hz));
  return 12.0 * std::log2(f0_hz / kSemitoneReferenceHz);
}

struct PitchConfig {
  double fmin_hz = 55.0;
  double fmax_hz = 650.0;
  double voicing_threshold = 0.45;
  // The first correlation peak within this fraction of the best one wins,
  // which keeps period multiples (octave-down errors) out.
  double octave_ratio = 0.9;
};

/// Per-frame F0 track. f0 = 0 marks an unvoiced frame. `voicing` holds the
/// normalized autocorrelation at the selected lag, clipped to [0, 1].
struct F0Contour {
  std::vector<double> f0_hz;
  std::vector<double> voicing;
  double hop_s = 0.0;
  double frame_length_s = 0.0;
  int sample_rate = 0;

  std::size_t size() const { return f0_hz.size(); }
  bool voiced(std::size_t i) const { return f0_hz[i] > 0.0; }
  double center_time(std::size_t i) const {
    return static_cast<double>(i) * hop_s + 0.5 * frame_length_s;
  }
  std::size_t voiced_count() const {
    return static_cast<std::size_t>(std::count_if(f0_hz.begin(), f0_hz.end(),
                                                  [](double f) { return f > 0.0; }));
  }
  double voiced_fraction() const {
    return f0_hz.empty() ? 0.0 : static_cast<double>(voiced_count()) / static_cast<double>(f0_hz.size());
  }
};

/// Normalized cross-correlation of a frame with itself at lags lo..hi,
/// computed from the difference-function identity
///   r(lag) = 1 - d(lag) / (e_head + e_tail) = 2 c(lag) / (e_head + e_tail)
/// where both energies cover only the overlapping part.
inline std::vector<double> normalized_autocorrelation(std::span<const double> x, std::size_t lo,
                                                      std::size_t hi) {
  const std::size_t n = x.size();
  std::vector<double> out(hi - lo + 1, 0.0);
  if (n < 2 || lo >= n) return out;
  const std::vector<double> c = autocorrelation(x, std::min(hi, n - 1));
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];
  for (std::size_t lag = lo; lag <= hi && lag < n; ++lag) {
    const double head = prefix[n - lag];
    const double tail = prefix[n] - prefix[lag];
    const double denom = head + tail;
    out[lag - lo] = denom > 0.0 ? 2.0 * c[lag] / denom : 0.0;
  }
  return out;
}

struct PitchEstimate {
  double f0_hz = 0.0;  // 0 when unvoiced
  double correlation = 0.0;
};

/// Best-period estimate for one (unwindowed) frame.
inline PitchEstimate estimate_frame_pitch(std::span<const double> frame, int sample_rate,
                                          const PitchConfig& cfg) {
  const std::size_t n = frame.size();
  const auto lag_min = static_cast<std::size_t>(std::max(2.0, std::floor(sample_rate / cfg.fmax_hz)));
  auto lag_max = static_cast<std::size_t>(std::ceil(sample_rate / cfg.fmin_hz));
  if (n < 4 || lag_min + 2 >= n) return {};
  lag_max = std::min(lag_max, n - 2);
  if (lag_max <= lag_min) return {};

  const std::size_t lo = lag_min - 1;
  const std::vector<double> r = normalized_autocorrelation(frame, lo, lag_max + 1);
  auto at = [&](std::size_t lag) { return r[lag - lo]; };

  double best = -1.0;
  for (std::size_t lag = lag_min; lag <= lag_max; ++lag)
    if (at(lag) >= at(lag - 1) && at(lag) > at(lag + 1)) best = std::max(best, at(lag));
  if (best <= 0.0) return {};

  std::size_t chosen = 0;
  for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
    if (at(lag) >= at(lag - 1) && at(lag) > at(lag + 1) && at(lag) >= cfg.octave_ratio * best) {
      chosen = lag;
      break;
    }
  }
  const double ym = at(chosen - 1), y0 = at(chosen), yp = at(chosen + 1);
  const double curvature = ym - 2.0 * y0 + yp;
  double shift = 0.0, peak = y0;
  if (curvature < 0.0) {
    shift = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
    peak = y0 - 0.25 * (ym - yp) * shift;
  }
  PitchEstimate est;
  est.correlation = std::clamp(peak, 0.0, 1.0);
  est.f0_hz = sample_rate / (static_cast<double>(chosen) + shift);
  return est;
}

/// Frame-wise F0. Frames should be rectangular-windowed: the correlation
/// measure is exactly 1 for a perfectly periodic frame only without tapering.
inline F0Contour detect_f0(const FrameSequence& frames, const PitchConfig& cfg) {
  if (frames.empty()) throw ValidationError("detect_f0: empty frame sequence");
  if (cfg.fmin_hz < 55.0) throw ValidationError("detect_f0: fmin must be >= 55 Hz");
  if (cfg.fmax_hz <= cfg.fmin_hz) throw ValidationError("detect_f0: fmax must exceed fmin");
  if (cfg.fmax_hz > 0.25 * frames.sample_rate)
    throw ValidationError("detect_f0: fmax must not exceed Nyquist / 2");

  F0Contour contour;
  contour.hop_s = static_cast<double>(frames.hop) / frames.sample_rate;
  contour.frame_length_s = static_cast<double>(frames.frame_length) / frames.sample_rate;
  contour.sample_rate = frames.sample_rate;
  contour.f0_hz.resize(frames.size(), 0.0);
  contour.voicing.resize(frames.size(), 0.0);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const PitchEstimate est = estimate_frame_pitch(frames.frames[i], frames.sample_rate, cfg);
    contour.voicing[i] = est.correlation;
    if (est.correlation >= cfg.voicing_threshold && est.f0_hz >= cfg.fmin_hz &&
        est.f0_hz <= cfg.fmax_hz)
      contour.f0_hz[i] = est.f0_hz;
  }
  return contour;
}

inline F0Contour detect_f0(const FrameSequence& frames, double fmin_hz, double fmax_hz,
                           double voicing_threshold) {
  PitchConfig cfg;
  cfg.fmin_hz = fmin_hz;
  cfg.fmax_hz = fmax_hz;
  cfg.voicing_threshold = voicing_threshold;
  return detect_f0(frames, cfg);
}

}  // namespace vocalrisk
