// vocalrisk/audio.hpp

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
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vocalrisk/errors.hpp"

namespace vocalrisk {

/// Lowest sample rate accepted for feature extraction. The alpha ratio
/// integrates up to 5 kHz, so Nyquist must reach it.
inline constexpr int kMinFeatureSampleRate = 11025;

/// Mono PCM signal with samples in [-1, 1].
class AudioBuffer {
 public:
  AudioBuffer() = default;

  AudioBuffer(std::vector<double> samples, int sample_rate)
      : samples_(std::move(samples)), sample_rate_(sample_rate) {
    if (sample_rate_ <= 0)
      throw ValidationError("sample rate must be positive, got " +
                            std::to_string(sample_rate_));
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const double s = samples_[i];
      if (!std::isfinite(s))
        throw ValidationError("non-finite sample at index " + std::to_string(i));
      if (std::abs(s) > 1.0)
        throw ValidationError("clipped input: |sample| > 1 at index " +
                              std::to_string(i) + " (value " +
                              std::to_string(s) + ")");
    }
  }

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_s() const {
    return sample_rate_ > 0 ? static_cast<double>(samples_.size()) / sample_rate_ : 0.0;
  }
  double nyquist() const { return 0.5 * sample_rate_; }

 private:
  std::vector<double> samples_;
  int sample_rate_ = 0;
};

/// Throws unless the buffer's rate supports the band features (alpha ratio
/// needs energy up to 5 kHz).
inline void require_feature_sample_rate(const AudioBuffer& buffer) {
  if (buffer.sample_rate() < kMinFeatureSampleRate)
    throw ValidationError(
        "sample rate " + std::to_string(buffer.sample_rate()) +
        " Hz is below 11025 Hz: the alpha ratio band reaches 5 kHz and needs "
        "a Nyquist frequency of at least 5 kHz");
}

enum class WindowKind { kRectangular, kHann, kHamming, kGaussian };

inline std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::kRectangular: return "rectangular";
    case WindowKind::kHann: return "hann";
    case WindowKind::kHamming: return "hamming";
    case WindowKind::kGaussian: return "gaussian";
  }
  return "unknown";
}

inline WindowKind parse_window_kind(const std::string& name) {
  if (name == "rectangular" || name == "rect") return WindowKind::kRectangular;
  if (name == "hann" || name == "hanning") return WindowKind::kHann;
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "gaussian" || name == "gauss") return WindowKind::kGaussian;
  throw ValidationError("unknown window kind '" + name + "'");
}

/// Symmetric window of the given length. Gaussian uses sigma = 0.4 of the
/// half length.
inline std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  const double denom = static_cast<double>(length - 1);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (std::size_t n = 0; n < length; ++n) {
    const double x = static_cast<double>(n);
    switch (kind) {
      case WindowKind::kRectangular:
        break;
      case WindowKind::kHann:
        w[n] = 0.5 - 0.5 * std::cos(kTwoPi * x / denom);
        break;
      case WindowKind::kHamming:
        w[n] = 0.54 - 0.46 * std::cos(kTwoPi * x / denom);
        break;
      case WindowKind::kGaussian: {
        const double half = denom / 2.0;
        const double z = (x - half) / (0.4 * half);
        w[n] = std::exp(-0.5 * z * z);
        break;
      }
    }
  }
  return w;
}

/// Fixed-length windowed blocks cut from a buffer at a constant hop.
struct FrameSequence {
  std::vector<std::vector<double>> frames;
  double frame_length_s = 0.0;
  double hop_s = 0.0;
  WindowKind window_kind = WindowKind::kRectangular;
  int sample_rate = 0;
  std::size_t frame_length = 0;  // samples
  std::size_t hop = 0;           // samples

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  std::size_t start_sample(std::size_t i) const { return i * hop; }
  double start_time(std::size_t i) const {
    return static_cast<double>(i * hop) / sample_rate;
  }
  double center_time(std::size_t i) const {
    return (static_cast<double>(i * hop) + 0.5 * static_cast<double>(frame_length)) /
           sample_rate;
  }
};

/// Number of frames for n samples: floor((n - len) / hop) + 1, or 0 when the
/// frame does not fit.
inline std::size_t frame_count(std::size_t n, std::size_t frame_length, std::size_t hop) {
  if (frame_length == 0 || hop == 0 || n < frame_length) return 0;
  return (n - frame_length) / hop + 1;
}

inline FrameSequence frame_signal(const AudioBuffer& buffer, double frame_length_s,
                                  double hop_s, WindowKind window_kind) {
  if (!(hop_s > 0.0)) throw ValidationError("hop must be positive");
  if (!(frame_length_s > 0.0)) throw ValidationError("frame length must be positive");
  if (hop_s > frame_length_s)
    throw ValidationError("hop must not exceed the frame length");

  FrameSequence seq;
  seq.frame_length_s = frame_length_s;
  seq.hop_s = hop_s;
  seq.window_kind = window_kind;
  seq.sample_rate = buffer.sample_rate();
  seq.frame_length = static_cast<std::size_t>(std::llround(frame_length_s * buffer.sample_rate()));
  seq.hop = static_cast<std::size_t>(std::llround(hop_s * buffer.sample_rate()));
  if (seq.frame_length == 0 || seq.hop == 0)
    throw ValidationError("frame or hop shorter than one sample");

  const std::size_t count = frame_count(buffer.size(), seq.frame_length, seq.hop);
  const std::vector<double> window = make_window(window_kind, seq.frame_length);
  const auto samples = buffer.samples();
  seq.frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> frame(seq.frame_length);
    const std::size_t start = i * seq.hop;
    for (std::size_t n = 0; n < seq.frame_length; ++n)
      frame[n] = samples[start + n] * window[n];
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

// ---------------------------------------------------------------------------
// WAV (RIFF) input/output. Little-endian PCM16 and IEEE float32, 1-2 channels.

enum class WavEncoding { kPcm16, kFloat32 };

namespace detail {

inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}
inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

}  // namespace detail

/// Decodes a RIFF/WAVE byte image. Stereo is downmixed by averaging channels.
inline AudioBuffer decode_wav(std::span<const unsigned char> bytes, const std::string& origin = "<memory>") {
  using detail::read_u16;
  using detail::read_u32;
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IoError(origin + ": truncated header or not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size())
        throw IoError(origin + ": truncated header (fmt chunk)");
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == 0xFFFE) {
        if (size < 40 || body + 40 > bytes.size())
          throw IoError(origin + ": truncated header (extensible fmt chunk)");
        format = read_u16(f + 24);  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw IoError(origin + ": data chunk precedes fmt chunk");
      data = bytes.data() + body;
      const std::size_t available = bytes.size() - body;
      if (size == 0xFFFFFFFFu) {
        data_size = available;  // streaming writers leave the size unset
      } else if (size > available) {
        throw IoError(origin + ": truncated data chunk (" + std::to_string(size) +
                      " bytes declared, " + std::to_string(available) + " present)");
      } else {
        data_size = size;
      }
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw IoError(origin + ": truncated header (no fmt chunk)");
  if (data == nullptr) throw IoError(origin + ": truncated header (no data chunk)");
  if (channels < 1 || channels > 2)
    throw IoError(origin + ": unsupported channel count " + std::to_string(channels));
  if (rate == 0) throw IoError(origin + ": sample rate is zero");

  WavEncoding enc;
  if (format == 1 && bits == 16) {
    enc = WavEncoding::kPcm16;
  } else if (format == 3 && bits == 32) {
    enc = WavEncoding::kFloat32;
  } else {
    throw IoError(origin + ": unsupported encoding (format " + std::to_string(format) +
                  ", " + std::to_string(bits) + " bits); expected PCM16 or float32");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n = data_size / frame_bytes;
  if (n == 0) throw IoError(origin + ": zero-length payload");

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * bytes_per_sample;
      if (enc == WavEncoding::kPcm16) {
        const auto v = static_cast<std::int16_t>(read_u16(p));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        const std::uint32_t raw = read_u32(p);
        float f;
        std::memcpy(&f, &raw, sizeof f);
        acc += static_cast<double>(f);
      }
    }
    out[i] = acc / channels;
  }
  try {
    return AudioBuffer(std::move(out), static_cast<int>(rate));
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

inline AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_wav(bytes, path.string());
}

/// Mono RIFF/WAVE image. PCM16 quantizes with a 32768 scale so that
/// decode(encode(x)) is exact for samples already on the 16-bit grid.
inline std::vector<unsigned char> encode_wav(const AudioBuffer& buffer,
                                             WavEncoding encoding = WavEncoding::kPcm16) {
  using detail::put_u16;
  using detail::put_u32;
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t format = encoding == WavEncoding::kPcm16 ? 1 : 3;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(buffer.size() * (bits / 8));
  const auto rate = static_cast<std::uint32_t>(buffer.sample_rate());

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_bytes);
  for (double s : buffer.samples()) {
    if (encoding == WavEncoding::kPcm16) {
      const long q = std::clamp(std::lround(s * 32768.0), -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      const auto f = static_cast<float>(s);
      std::uint32_t raw;
      std::memcpy(&raw, &f, sizeof raw);
      put_u32(out, raw);
    }
  }
  return out;
}

inline void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer,
                      WavEncoding encoding = WavEncoding::kPcm16) {
  const auto bytes = encode_wav(buffer, encoding);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace vocalrisk
