// Copyright 2026 The roomrelight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "roomrelight/dsp/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace roomrelight::dsp {
namespace {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void put_le(std::vector<unsigned char>& out, T v) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

double decode_sample(const unsigned char* p, std::uint16_t format, std::uint16_t bits) {
  if (format == kFormatFloat) {
    return bits == 32 ? static_cast<double>(read_le<float>(p)) : read_le<double>(p);
  }
  switch (bits) {
    case 8:
      return (static_cast<double>(p[0]) - 128.0) / 128.0;
    case 16:
      return read_le<std::int16_t>(p) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default:
      return read_le<std::int32_t>(p) / 2147483648.0;
  }
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open WAV file '{}'", path.string()));
  const std::vector<unsigned char> data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto fail = [&](const std::string& why) {
    return std::runtime_error(fmt::format("malformed WAV file '{}': {}", path.string(), why));
  };
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 || std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw fail("missing RIFF/WAVE header");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const unsigned char* chunk = data.data() + pos;
    const std::size_t size = read_le<std::uint32_t>(chunk + 4);
    const std::size_t avail = std::min(size, data.size() - pos - 8);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw fail("short fmt chunk");
      format = read_le<std::uint16_t>(chunk + 8);
      channels = read_le<std::uint16_t>(chunk + 10);
      rate = read_le<std::uint32_t>(chunk + 12);
      bits = read_le<std::uint16_t>(chunk + 22);
      if (format == kFormatExtensible) {
        if (avail < 26) throw fail("short extensible fmt chunk");
        format = read_le<std::uint16_t>(chunk + 8 + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      payload = chunk + 8;
      payload_size = avail;
    }
    pos += 8 + size + (size & 1U);
  }
  if (channels == 0 || rate == 0) throw fail("missing fmt chunk");
  if (payload == nullptr) throw fail("missing data chunk");
  const bool pcm_ok = format == kFormatPcm && (bits == 8 || bits == 16 || bits == 24 || bits == 32);
  const bool float_ok = format == kFormatFloat && (bits == 32 || bits == 64);
  if (!pcm_ok && !float_ok) throw fail(fmt::format("unsupported encoding (format {}, {} bits)", format, bits));

  const std::size_t width = bits / 8U;
  const std::size_t frame = width * channels;
  const std::size_t frames = payload_size / frame;
  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) acc += decode_sample(payload + i * frame + c * width, format, bits);
    samples[i] = acc / channels;
  }
  return AudioBuffer(std::move(samples), static_cast<int>(rate));
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio, WavFormat format) {
  const bool is_float = format == WavFormat::kFloat32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(audio.size() * (bits / 8U));
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_le<std::uint32_t>(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, is_float ? kFormatFloat : kFormatPcm);
  put_le<std::uint16_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(audio.sample_rate()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(audio.sample_rate()) * (bits / 8U));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(bits / 8U));
  put_le<std::uint16_t>(out, bits);
  put_tag(out, "data");
  put_le<std::uint32_t>(out, data_bytes);
  for (double v : audio.samples()) {
    if (is_float) {
      put_le<float>(out, static_cast<float>(v));
    } else {
      const double clipped = std::clamp(v, -1.0, 1.0);
      put_le<std::int16_t>(out, static_cast<std::int16_t>(std::lround(clipped * 32767.0)));
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write WAV file '{}'", path.string()));
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

AudioBuffer resample(const AudioBuffer& x, int target_rate) {
  if (target_rate <= 0) throw std::invalid_argument("resample: target rate must be positive");
  if (target_rate == x.sample_rate() || x.empty()) {
    return AudioBuffer(std::vector<double>(x.samples().begin(), x.samples().end()), target_rate);
  }
  constexpr int kZeroCrossings = 32;
  const double ratio = static_cast<double>(target_rate) / x.sample_rate();
  const double cutoff = std::min(1.0, ratio);  // relative to the input Nyquist
  const double half_width = kZeroCrossings / cutoff;
  const auto n_out = static_cast<std::size_t>(std::ceil(static_cast<double>(x.size()) * ratio));
  const auto in = x.samples();
  const auto n_in = static_cast<std::ptrdiff_t>(in.size());
  std::vector<double> y(n_out, 0.0);
  for (std::size_t m = 0; m < n_out; ++m) {
    const double t = static_cast<double>(m) / ratio;
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil(t - half_width));
    const auto hi = static_cast<std::ptrdiff_t>(std::floor(t + half_width));
    double acc = 0.0;
    for (std::ptrdiff_t n = std::max<std::ptrdiff_t>(lo, 0); n <= std::min(hi, n_in - 1); ++n) {
      const double d = t - static_cast<double>(n);
      const double arg = cutoff * d;
      const double sinc = arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
      const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * d / half_width);
      acc += in[static_cast<std::size_t>(n)] * cutoff * sinc * w;
    }
    y[m] = acc;
  }
  return AudioBuffer(std::move(y), target_rate);
}

}  // namespace roomrelight::dsp
