// vocalrisk/voice_quality.hpp

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
#include <optional>
#include <vector>

#include "vocalrisk/audio.hpp"
#include "vocalrisk/pitch.hpp"

namespace vocalrisk {

/// One located glottal cycle: waveform peak time (s) and amplitude.
struct GlottalPulse {
  double time_s = 0.0;
  double amplitude = 0.0;
  std::size_t run = 0;  // index of the voiced run it belongs to
};

struct VoiceQualityConfig {
  double fmin_hz = 55.0;
  double fmax_hz = 650.0;
  double max_period_factor = 1.3;     // consecutive periods differing more are skipped
  double max_amplitude_factor = 1.6;  // same for cycle amplitudes
};

struct VoiceQuality {
  std::optional<double> jitter_local;
  std::optional<double> shimmer_local;
  std::optional<double> hnr_db;
  std::size_t pulse_count = 0;
  std::size_t period_pairs = 0;
};

namespace detail {

// Sub-sample peak of x around index i (parabola through i-1, i, i+1).
inline std::pair<double, double> refine_peak(std::span<const double> x, std::size_t i) {
  if (i == 0 || i + 1 >= x.size()) return {static_cast<double>(i), x[i]};
  const double ym = x[i - 1], y0 = x[i], yp = x[i + 1];
  const double curvature = ym - 2.0 * y0 + yp;
  if (!(curvature < 0.0)) return {static_cast<double>(i), y0};
  const double shift = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
  return {static_cast<double>(i) + shift, y0 - 0.25 * (ym - yp) * shift};
}

inline std::size_t argmax_in(std::span<const double> x, long lo, long hi) {
  lo = std::max(lo, 0L);
  hi = std::min(hi, static_cast<long>(x.size()) - 1);
  if (hi < lo) return x.size();
  auto best = static_cast<std::size_t>(lo);
  for (long i = lo; i <= hi; ++i)
    if (x[static_cast<std::size_t>(i)] > x[best]) best = static_cast<std::size_t>(i);
  return best;
}

}  // namespace detail

/// Locates waveform peaks one local period apart inside each voiced run of
/// the contour.
inline std::vector<GlottalPulse> locate_glottal_pulses(const AudioBuffer& buffer,
                                                       const F0Contour& contour) {
  std::vector<GlottalPulse> pulses;
  const auto x = buffer.samples();
  const double fs = buffer.sample_rate();
  std::size_t run_index = 0;
  std::size_t i = 0;
  while (i < contour.size()) {
    if (!contour.voiced(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < contour.size() && contour.voiced(j + 1)) ++j;

    const double t_begin = std::max(0.0, contour.center_time(i) - 0.5 * contour.hop_s);
    const double t_end = std::min(buffer.duration_s(), contour.center_time(j) + 0.5 * contour.hop_s);
    auto period_at = [&](double t) {
      const double idx = (t - 0.5 * contour.frame_length_s) / contour.hop_s;
      const auto k = static_cast<std::size_t>(
          std::clamp(std::lround(idx), static_cast<long>(i), static_cast<long>(j)));
      return fs / contour.f0_hz[k];  // samples
    };

    std::vector<GlottalPulse> run;
    const double mid = 0.5 * (t_begin + t_end) * fs;
    const double p_mid = period_at(mid / fs);
    const std::size_t anchor = detail::argmax_in(x, std::lround(mid - 0.5 * p_mid), std::lround(mid + 0.5 * p_mid));
    if (anchor < x.size()) {
      auto [pos, amp] = detail::refine_peak(x, anchor);
      run.push_back({pos / fs, amp, run_index});
      // forward
      double cur = pos;
      while (true) {
        const double p = period_at(cur / fs);
        const std::size_t next = detail::argmax_in(x, std::lround(cur + 0.8 * p), std::lround(cur + 1.2 * p));
        if (next >= x.size() || static_cast<double>(next) / fs > t_end) break;
        auto [npos, namp] = detail::refine_peak(x, next);
        if (npos <= cur) break;
        run.push_back({npos / fs, namp, run_index});
        cur = npos;
      }
      // backward
      cur = pos;
      std::vector<GlottalPulse> before;
      while (true) {
        const double p = period_at(cur / fs);
        const long hi = std::lround(cur - 0.8 * p), lo = std::lround(cur - 1.2 * p);
        if (hi < 0) break;
        const std::size_t prev = detail::argmax_in(x, lo, hi);
        if (prev >= x.size() || static_cast<double>(prev) / fs < t_begin) break;
        auto [ppos, pamp] = detail::refine_peak(x, prev);
        if (ppos >= cur) break;
        before.push_back({ppos / fs, pamp, run_index});
        cur = ppos;
      }
      std::reverse(before.begin(), before.end());
      pulses.insert(pulses.end(), before.begin(), before.end());
      pulses.insert(pulses.end(), run.begin(), run.end());
    }
    ++run_index;
    i = j + 1;
  }
  return pulses;
}

/// Local jitter and shimmer over located cycles, HNR from the per-frame
/// correlation peak r as 10 log10(r / (1 - r)) averaged over voiced frames.
inline VoiceQuality jitter_shimmer_hnr(const AudioBuffer& buffer, const F0Contour& contour,
                                       const VoiceQualityConfig& cfg = {}) {
  VoiceQuality out;
  const std::vector<GlottalPulse> pulses = locate_glottal_pulses(buffer, contour);
  out.pulse_count = pulses.size();

  const double min_period = 1.0 / cfg.fmax_hz, max_period = 1.0 / cfg.fmin_hz;
  auto valid_period = [&](double t) { return t >= min_period && t <= max_period; };

  double period_sum = 0.0, period_diff = 0.0, amp_sum = 0.0, amp_diff = 0.0;
  std::size_t period_n = 0, amp_n = 0;
  std::size_t period_pairs = 0, amp_pairs = 0;
  for (std::size_t k = 0; k + 1 < pulses.size(); ++k) {
    if (pulses[k].run != pulses[k + 1].run) continue;
    const double t1 = pulses[k + 1].time_s - pulses[k].time_s;
    if (!valid_period(t1)) continue;
    period_sum += t1;
    ++period_n;
    amp_sum += pulses[k].amplitude + pulses[k + 1].amplitude;
    amp_n += 2;
    if (k + 2 < pulses.size() && pulses[k + 2].run == pulses[k].run) {
      const double t2 = pulses[k + 2].time_s - pulses[k + 1].time_s;
      if (valid_period(t2) && std::max(t1, t2) / std::min(t1, t2) <= cfg.max_period_factor) {
        period_diff += std::abs(t2 - t1);
        ++period_pairs;
      }
    }
    const double a0 = pulses[k].amplitude, a1 = pulses[k + 1].amplitude;
    if (a0 > 0.0 && a1 > 0.0 && std::max(a0, a1) / std::min(a0, a1) <= cfg.max_amplitude_factor) {
      amp_diff += std::abs(a1 - a0);
      ++amp_pairs;
    }
  }
  out.period_pairs = period_pairs;
  // two period pairs = three consecutive periods
  if (period_pairs >= 2 && period_sum > 0.0)
    out.jitter_local = (period_diff / static_cast<double>(period_pairs)) /
                       (period_sum / static_cast<double>(period_n));
  if (amp_pairs > 0 && period_pairs >= 2 && amp_sum > 0.0)
    out.shimmer_local = (amp_diff / static_cast<double>(amp_pairs)) /
                        (amp_sum / static_cast<double>(amp_n));

  double hnr = 0.0;
  std::size_t voiced = 0;
  for (std::size_t i = 0; i < contour.size(); ++i) {
    if (!contour.voiced(i)) continue;
    const double r = std::clamp(contour.voicing[i], 1e-10, 1.0 - 1e-10);
    hnr += 10.0 * std::log10(r / (1.0 - r));
    ++voiced;
  }
  if (voiced > 0) out.hnr_db = hnr / static_cast<double>(voiced);
  return out;
}

}  // namespace vocalrisk
