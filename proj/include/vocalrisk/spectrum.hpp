// vocalrisk/spectrum.hpp

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
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "vocalrisk/errors.hpp"

namespace vocalrisk {

/// Floor applied to every dB conversion.
inline constexpr double kDbFloor = -120.0;

/// 20 log10(magnitude / reference), floored at kDbFloor.
inline double amplitude_db(double magnitude, double reference = 1.0) {
  const double floor_mag = reference * 1e-6;
  if (!(magnitude > floor_mag)) return kDbFloor;
  return 20.0 * std::log10(magnitude / reference);
}

/// 10 log10(power ratio), floored at kDbFloor.
inline double power_db(double ratio) {
  if (!(ratio > 1e-12)) return kDbFloor;
  return 10.0 * std::log10(ratio);
}

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// In-place iterative radix-2 FFT. inverse=true computes the unscaled inverse.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n)) throw ValidationError("FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::size_t half = len / 2;
    // twiddles computed directly per index to avoid accumulated rounding
    std::vector<std::complex<double>> tw(half);
    for (std::size_t k = 0; k < half; ++k) tw[k] = std::polar(1.0, ang * static_cast<double>(k));
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + half] * tw[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

/// One-sided magnitude spectrum of a (zero-padded) real frame.
struct Spectrum {
  std::vector<double> magnitudes;  // fft_size/2 + 1 bins, linear, unnormalized DFT
  std::size_t fft_size = 0;
  int sample_rate = 0;
  double reference = 1.0;  // dB reference level

  std::size_t bins() const { return magnitudes.size(); }
  double bin_hz() const { return static_cast<double>(sample_rate) / static_cast<double>(fft_size); }
  double frequency(std::size_t k) const { return static_cast<double>(k) * bin_hz(); }
  double nyquist() const { return 0.5 * sample_rate; }
  double db(std::size_t k) const { return amplitude_db(magnitudes[k], reference); }
  double power(std::size_t k) const { return magnitudes[k] * magnitudes[k]; }

  /// Root-sum-square of the one-sided magnitudes. Scales linearly with gain.
  double rss_level() const {
    double acc = 0.0;
    for (double m : magnitudes) acc += m * m;
    return std::sqrt(acc);
  }
};

inline Spectrum magnitude_spectrum(std::span<const double> frame, std::size_t fft_size,
                                   int sample_rate) {
  if (!is_power_of_two(fft_size))
    throw ValidationError("fft size " + std::to_string(fft_size) + " is not a power of two");
  if (fft_size < frame.size())
    throw ValidationError("fft size " + std::to_string(fft_size) +
                          " is shorter than the frame (" + std::to_string(frame.size()) + ")");
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  fft_inplace(buf);
  Spectrum s;
  s.fft_size = fft_size;
  s.sample_rate = sample_rate;
  s.magnitudes.resize(fft_size / 2 + 1);
  for (std::size_t k = 0; k < s.magnitudes.size(); ++k) s.magnitudes[k] = std::abs(buf[k]);
  return s;
}

/// Raw cross term sum_t x[t] x[t + lag] for lags 0..max_lag via FFT.
inline std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  max_lag = std::min(max_lag, n == 0 ? 0 : n - 1);
  const std::size_t size = next_power_of_two(2 * n);
  std::vector<std::complex<double>> buf(size);
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
  fft_inplace(buf);
  for (auto& v : buf) v = std::norm(v);
  fft_inplace(buf, true);
  std::vector<double> r(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) r[k] = buf[k].real() / static_cast<double>(size);
  return r;
}

}  // namespace vocalrisk
