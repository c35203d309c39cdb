// vocalrisk/spectral.hpp

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

// Frame-level spectral descriptors: MFCCs, harmonic amplitudes, band slopes
// and the alpha ratio.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "vocalrisk/errors.hpp"
#include "vocalrisk/spectrum.hpp"

namespace vocalrisk {

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct MelConfig {
  int n_filters = 26;
  int n_coefficients = 4;  // returned coefficients are 1..n_coefficients
  double fmin_hz = 20.0;
  double fmax_hz = 0.0;    // 0 means min(8000, Nyquist)

  double resolved_fmax(double nyquist) const {
    return fmax_hz > 0.0 ? fmax_hz : std::min(8000.0, nyquist);
  }
};

/// Triangular filters equally spaced on the mel scale, evaluated at the bin
/// centre frequencies of one FFT size.
class MelFilterbank {
 public:
  MelFilterbank(const MelConfig& cfg, std::size_t fft_size, int sample_rate)
      : cfg_(cfg), fft_size_(fft_size), sample_rate_(sample_rate) {
    const double nyquist = 0.5 * sample_rate;
    const double fmax = cfg.resolved_fmax(nyquist);
    if (fmax > nyquist + 1e-9)
      throw ValidationError("mel fmax " + std::to_string(fmax) + " Hz exceeds Nyquist " +
                            std::to_string(nyquist) + " Hz");
    if (!(cfg.fmin_hz < fmax)) throw ValidationError("mel fmin must be below fmax");
    if (cfg.n_filters < 2) throw ValidationError("need at least two mel filters");
    if (cfg.n_coefficients < 1 || cfg.n_coefficients >= cfg.n_filters)
      throw ValidationError("n_coefficients must be in [1, n_filters)");

    const double mel_lo = hz_to_mel(cfg.fmin_hz);
    const double mel_hi = hz_to_mel(fmax);
    const int m = cfg.n_filters;
    std::vector<double> edges(static_cast<std::size_t>(m) + 2);
    for (int i = 0; i < m + 2; ++i)
      edges[static_cast<std::size_t>(i)] = mel_lo + (mel_hi - mel_lo) * i / (m + 1);

    const std::size_t bins = fft_size / 2 + 1;
    const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_size);
    weights_.assign(static_cast<std::size_t>(m), std::vector<double>(bins, 0.0));
    for (int f = 0; f < m; ++f) {
      const double left = edges[static_cast<std::size_t>(f)];
      const double centre = edges[static_cast<std::size_t>(f) + 1];
      const double right = edges[static_cast<std::size_t>(f) + 2];
      for (std::size_t k = 0; k < bins; ++k) {
        const double mel = hz_to_mel(static_cast<double>(k) * bin_hz);
        double w = 0.0;
        if (mel > left && mel <= centre)
          w = (mel - left) / (centre - left);
        else if (mel > centre && mel < right)
          w = (right - mel) / (right - centre);
        weights_[static_cast<std::size_t>(f)][k] = w;
      }
    }
  }

  const MelConfig& config() const { return cfg_; }
  std::size_t fft_size() const { return fft_size_; }
  int sample_rate() const { return sample_rate_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }

  /// Power-weighted filter energies.
  std::vector<double> energies(const Spectrum& s) const {
    if (s.fft_size != fft_size_ || s.sample_rate != sample_rate_)
      throw ValidationError("spectrum does not match the filterbank geometry");
    std::vector<double> e(weights_.size(), 0.0);
    for (std::size_t f = 0; f < weights_.size(); ++f)
      for (std::size_t k = 0; k < s.bins(); ++k) e[f] += weights_[f][k] * s.power(k);
    return e;
  }

 private:
  MelConfig cfg_;
  std::size_t fft_size_;
  int sample_rate_;
  std::vector<std::vector<double>> weights_;
};

/// Coefficients 1..n of the orthonormal DCT-II of log filter energies.
/// Coefficient 0 (overall level) is dropped. Log energies are floored at
/// -120 dB (energy 1e-12).
inline std::vector<double> mfcc_from_energies(const std::vector<double>& energies, int n_coefficients) {
  const std::size_t m = energies.size();
  std::vector<double> log_e(m);
  for (std::size_t i = 0; i < m; ++i) log_e[i] = std::log(std::max(energies[i], 1e-12));
  const double scale = std::sqrt(2.0 / static_cast<double>(m));
  std::vector<double> out(static_cast<std::size_t>(n_coefficients));
  for (int k = 1; k <= n_coefficients; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      acc += log_e[i] * std::cos(std::numbers::pi * k * (static_cast<double>(i) + 0.5) / static_cast<double>(m));
    out[static_cast<std::size_t>(k - 1)] = scale * acc;
  }
  return out;
}

inline std::vector<double> mfcc(const Spectrum& spectrum, const MelFilterbank& bank) {
  return mfcc_from_energies(bank.energies(spectrum), bank.config().n_coefficients);
}

inline std::vector<double> mfcc(const Spectrum& spectrum, const MelConfig& cfg) {
  return mfcc(spectrum, MelFilterbank(cfg, spectrum.fft_size, spectrum.sample_rate));
}

// ---------------------------------------------------------------------------
// Harmonics. Harmonic k sits at (k + 1) * f0: H0 is the peak at the
// fundamental, H1 at 2 f0, H2 at 3 f0.

/// dB level (re spectrum.reference) of the highest peak within +-f0/4 of
/// (k + 1) * f0, refined by a parabola through the log magnitudes.
inline double harmonic_amplitude(const Spectrum& spectrum, double f0, int k) {
  if (!(f0 > 0.0)) throw ValidationError("harmonic_amplitude: f0 must be positive");
  if (k < 0) throw ValidationError("harmonic_amplitude: negative harmonic index");
  const double target = (k + 1) * f0;
  const double half_width = 0.25 * f0;
  if (target + half_width >= spectrum.nyquist())
    throw ValidationError("harmonic " + std::to_string(k) + " at " + std::to_string(target) +
                          " Hz lies above Nyquist");
  const double bin_hz = spectrum.bin_hz();
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil((target - half_width) / bin_hz)));
  const auto hi = std::min(spectrum.bins() - 1,
                           static_cast<std::size_t>(std::floor((target + half_width) / bin_hz)));
  if (hi < lo) throw ValidationError("harmonic search window narrower than one bin");

  std::size_t peak = lo;
  for (std::size_t b = lo; b <= hi; ++b)
    if (spectrum.magnitudes[b] > spectrum.magnitudes[peak]) peak = b;

  const double y0 = spectrum.db(peak);
  if (peak == 0 || peak + 1 >= spectrum.bins() || peak == lo || peak == hi) return y0;
  const double ym = spectrum.db(peak - 1), yp = spectrum.db(peak + 1);
  const double curvature = ym - 2.0 * y0 + yp;
  if (!(curvature < 0.0)) return y0;
  const double shift = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
  return y0 - 0.25 * (ym - yp) * shift;
}

/// (H1 - H2) - H0 in dB, levels relative to spectrum.reference.
inline double log_rel_f0_h1_h2(const Spectrum& spectrum, double f0) {
  const double h0 = harmonic_amplitude(spectrum, f0, 0);
  const double h1 = harmonic_amplitude(spectrum, f0, 1);
  const double h2 = harmonic_amplitude(spectrum, f0, 2);
  return (h1 - h2) - h0;
}

// ---------------------------------------------------------------------------

/// Least-squares slope (dB/Hz) of bin level against bin frequency over the
/// bins inside [lo_hz, hi_hz].
inline double spectral_slope_band(const Spectrum& spectrum, double lo_hz, double hi_hz) {
  if (hi_hz > spectrum.nyquist() + 1e-9)
    throw ValidationError("slope band upper edge " + std::to_string(hi_hz) + " Hz exceeds Nyquist");
  if (!(lo_hz < hi_hz)) throw ValidationError("slope band must have lo < hi");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < spectrum.bins(); ++k) {
    const double f = spectrum.frequency(k);
    if (f < lo_hz || f > hi_hz) continue;
    const double y = spectrum.db(k);
    sx += f;
    sy += y;
    sxx += f * f;
    sxy += f * y;
    ++n;
  }
  if (n < 4)
    throw ValidationError("slope band [" + std::to_string(lo_hz) + ", " + std::to_string(hi_hz) +
                          "] Hz holds only " + std::to_string(n) + " bins (need 4)");
  const double dn = static_cast<double>(n);
  const double var = sxx - sx * sx / dn;
  return (sxy - sx * sy / dn) / var;
}

struct AlphaRatio {
  double db = 0.0;
  bool band_empty = false;  // no energy in 1-5 kHz; db holds the floor value
};

inline constexpr double kAlphaLowBegin = 50.0;
inline constexpr double kAlphaSplit = 1000.0;
inline constexpr double kAlphaHighEnd = 5000.0;

/// 10 log10(power in [1, 5] kHz / power in [50, 1000) Hz).
inline AlphaRatio alpha_ratio(const Spectrum& spectrum) {
  if (spectrum.nyquist() < kAlphaHighEnd)
    throw ValidationError("alpha ratio needs a Nyquist frequency of at least 5 kHz");
  double low = 0.0, high = 0.0;
  for (std::size_t k = 0; k < spectrum.bins(); ++k) {
    const double f = spectrum.frequency(k);
    if (f >= kAlphaLowBegin && f < kAlphaSplit)
      low += spectrum.power(k);
    else if (f >= kAlphaSplit && f <= kAlphaHighEnd)
      high += spectrum.power(k);
  }
  if (!(low > 0.0)) throw ValidationError("alpha ratio undefined: no energy in 50-1000 Hz");
  AlphaRatio out;
  if (!(high > 0.0)) {
    out.db = kDbFloor;
    out.band_empty = true;
    return out;
  }
  out.db = std::max(kDbFloor, 10.0 * std::log10(high / low));
  return out;
}

}  // namespace vocalrisk
