// vocalrisk/splice.hpp

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

// Random splicing anonymizer: cut a recording into segments of random length,
// shuffle them and rejoin with short equal-power crossfades. Word order is
// destroyed, local spectra survive.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "vocalrisk/audio.hpp"
#include "vocalrisk/errors.hpp"

namespace vocalrisk {

struct SpliceConfig {
  double seg_min_s = 0.6;
  double seg_max_s = 1.2;
  double crossfade_s = 0.010;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(seg_min_s > 0.0)) throw ValidationError("seg_min must be positive");
    if (seg_max_s < seg_min_s) throw ValidationError("seg_max must be >= seg_min");
    if (crossfade_s < 0.0) throw ValidationError("crossfade must be non-negative");
    if (!(crossfade_s < seg_min_s / 2.0))
      throw ValidationError("crossfade must be shorter than seg_min / 2");
  }
};

/// Auditable record of one splice: where the cuts are and how the segments
/// were reordered. Output segment m is original segment permutation[m].
struct SplicePlan {
  std::vector<std::size_t> boundaries;  // first = 0, last = signal length
  std::vector<std::size_t> permutation;
  int sample_rate = 0;
  SpliceConfig config;

  std::size_t segment_count() const { return permutation.size(); }
  std::size_t segment_begin(std::size_t s) const { return boundaries[s]; }
  std::size_t segment_length(std::size_t s) const { return boundaries[s + 1] - boundaries[s]; }
};

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; identical on every standard
// library since mt19937_64 itself is fully specified.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

}  // namespace detail

inline SplicePlan plan_splice(const AudioBuffer& buffer, const SpliceConfig& config) {
  config.validate();
  const double rate = buffer.sample_rate();
  const auto seg_min = static_cast<std::size_t>(std::llround(config.seg_min_s * rate));
  const auto seg_max = static_cast<std::size_t>(std::llround(config.seg_max_s * rate));
  const std::size_t n = buffer.size();
  if (n < seg_min || n == 0)
    throw ValidationError("signal too short to splice: " + std::to_string(buffer.duration_s()) +
                          " s < seg_min " + std::to_string(config.seg_min_s) + " s");

  std::mt19937_64 rng(config.seed);
  SplicePlan plan;
  plan.sample_rate = buffer.sample_rate();
  plan.config = config;
  plan.boundaries.push_back(0);
  std::size_t pos = 0;
  while (pos < n) {
    const std::size_t remaining = n - pos;
    if (remaining <= seg_max) {
      plan.boundaries.push_back(n);  // the last segment absorbs the remainder
      break;
    }
    std::size_t len = seg_min + static_cast<std::size_t>(
                                    detail::unit_uniform(rng) * static_cast<double>(seg_max - seg_min + 1));
    len = std::min(len, seg_max);
    // never leave a tail shorter than seg_min
    if (remaining - len < seg_min) len = remaining - seg_min;
    pos += len;
    plan.boundaries.push_back(pos);
  }

  const std::size_t count = plan.boundaries.size() - 1;
  plan.permutation.resize(count);
  std::iota(plan.permutation.begin(), plan.permutation.end(), std::size_t{0});
  for (std::size_t i = count; i-- > 1;) {
    const std::size_t j = detail::uniform_index(rng, i + 1);
    std::swap(plan.permutation[i], plan.permutation[j]);
  }
  return plan;
}

/// Crossfade length in samples used at every junction of this plan.
inline std::size_t crossfade_samples(const SplicePlan& plan, double crossfade_s) {
  std::size_t x = static_cast<std::size_t>(std::llround(crossfade_s * plan.sample_rate));
  for (std::size_t s = 0; s < plan.segment_count(); ++s)
    x = std::min(x, plan.segment_length(s) / 2);
  return x;
}

inline AudioBuffer apply_splice(const AudioBuffer& buffer, const SplicePlan& plan,
                                double crossfade_s) {
  if (plan.boundaries.size() < 2 || plan.boundaries.front() != 0 ||
      plan.boundaries.back() != buffer.size())
    throw ValidationError("splice plan does not match the buffer length (" +
                          std::to_string(plan.boundaries.empty() ? 0 : plan.boundaries.back()) +
                          " vs " + std::to_string(buffer.size()) + " samples)");
  if (plan.permutation.size() + 1 != plan.boundaries.size())
    throw ValidationError("splice plan permutation size does not match its segments");
  if (crossfade_s < 0.0) throw ValidationError("crossfade must be non-negative");

  const std::size_t xf = crossfade_samples(plan, crossfade_s);
  const auto in = buffer.samples();
  std::vector<double> out;
  out.reserve(buffer.size());

  // equal-power fade: cos^2 + sin^2 = 1
  std::vector<double> fade_in(xf), fade_out(xf);
  for (std::size_t i = 0; i < xf; ++i) {
    const double theta = 0.5 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(xf);
    fade_in[i] = std::sin(theta);
    fade_out[i] = std::cos(theta);
  }

  for (std::size_t m = 0; m < plan.permutation.size(); ++m) {
    const std::size_t seg = plan.permutation[m];
    const std::size_t begin = plan.segment_begin(seg);
    const std::size_t len = plan.segment_length(seg);
    std::size_t skip = 0;
    if (m > 0 && xf > 0) {
      const std::size_t tail = out.size() - xf;
      for (std::size_t i = 0; i < xf; ++i)
        out[tail + i] = out[tail + i] * fade_out[i] + in[begin + i] * fade_in[i];
      skip = xf;
    }
    out.insert(out.end(), in.begin() + static_cast<std::ptrdiff_t>(begin + skip),
               in.begin() + static_cast<std::ptrdiff_t>(begin + len));
  }
  for (double& s : out) s = std::clamp(s, -1.0, 1.0);
  return AudioBuffer(std::move(out), buffer.sample_rate());
}

inline nlohmann::ordered_json to_json(const SplicePlan& plan) {
  nlohmann::ordered_json j;
  j["sample_rate"] = plan.sample_rate;
  j["config"] = {{"seg_min_s", plan.config.seg_min_s},
                 {"seg_max_s", plan.config.seg_max_s},
                 {"crossfade_s", plan.config.crossfade_s},
                 {"seed", plan.config.seed}};
  j["boundaries"] = plan.boundaries;
  j["permutation"] = plan.permutation;
  return j;
}

inline SplicePlan splice_file(const std::filesystem::path& in_path,
                              const std::filesystem::path& out_path, const SpliceConfig& config) {
  const AudioBuffer input = load_wav(in_path);
  SplicePlan plan = plan_splice(input, config);
  write_wav(out_path, apply_splice(input, plan, config.crossfade_s));
  return plan;
}

}  // namespace vocalrisk
