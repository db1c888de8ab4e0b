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

#include "roomrelight/dataset/speech.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "roomrelight/dsp/filterbank.hpp"

namespace roomrelight::dataset {
namespace {

using Rng = std::mt19937_64;

struct Vowel {
  std::array<double, 3> formants;
};

// Adult male averages for five vowels (a, e, i, o, u).
constexpr std::array<Vowel, 5> kVowels{{
    {{730.0, 1090.0, 2440.0}},
    {{530.0, 1840.0, 2480.0}},
    {{270.0, 2290.0, 3010.0}},
    {{570.0, 840.0, 2410.0}},
    {{300.0, 870.0, 2240.0}},
}};

Rng seeded(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  return Rng(seq);
}

dsp::Biquad resonator(double freq, double bandwidth, double fs) {
  const double r = std::exp(-std::numbers::pi * bandwidth / fs);
  return {1.0 - r, 0.0, 0.0, -2.0 * r * std::cos(2.0 * std::numbers::pi * freq / fs), r * r};
}

void apply_fade(std::span<double> x, std::size_t ramp) {
  ramp = std::min(ramp, x.size() / 2);
  for (std::size_t i = 0; i < ramp; ++i) {
    const double w = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(ramp));
    x[i] *= w;
    x[x.size() - 1 - i] *= w;
  }
}

std::vector<double> syllable(const VoiceParams& v, Rng& rng, double fs) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto len = static_cast<std::size_t>((0.12 + 0.23 * u(rng)) * fs);
  const Vowel& vowel = kVowels[static_cast<std::size_t>(u(rng) * kVowels.size()) % kVowels.size()];

  // Glottal pulses with a falling pitch contour and a little jitter.
  std::vector<double> src(len, 0.0);
  const double start_f0 = v.f0_hz * (1.0 + 0.15 * (u(rng) - 0.3));
  double phase = 0.0, lp = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double f0 = start_f0 * (1.0 - 0.2 * static_cast<double>(i) / static_cast<double>(len));
    phase += f0 * (1.0 + 0.01 * gauss(rng)) / fs;
    double e = v.breath * gauss(rng);
    if (phase >= 1.0) {
      phase -= 1.0;
      e += 1.0;
    }
    lp = v.tilt * lp + e;
    src[i] = lp;
  }
  std::vector<dsp::Biquad> tract;
  for (double f : vowel.formants) {
    const double fv = f / v.tract_scale;
    if (fv < 0.45 * fs) tract.push_back(resonator(fv, 60.0 + 0.06 * fv, fs));
  }
  dsp::filter_sections(tract, src);
  apply_fade(src, static_cast<std::size_t>(0.015 * fs));

  if (u(rng) < 0.3) {
    // Fricative onset: high-passed noise burst.
    std::vector<double> burst(static_cast<std::size_t>((0.04 + 0.08 * u(rng)) * fs));
    double prev = 0.0;
    for (double& s : burst) {
      const double n = gauss(rng);
      s = 0.3 * (n - prev);
      prev = n;
    }
    apply_fade(burst, static_cast<std::size_t>(0.01 * fs));
    burst.insert(burst.end(), src.begin(), src.end());
    return burst;
  }
  return src;
}

}  // namespace

VoiceParams voice_for_speaker(std::size_t speaker, std::uint64_t seed) {
  Rng rng = seeded(seed, 0x5eed, speaker);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VoiceParams v;
  v.f0_hz = 85.0 + 170.0 * u(rng);
  v.tract_scale = 0.82 + 0.36 * u(rng);
  v.tilt = 0.82 + 0.15 * u(rng);
  v.breath = 0.02 + 0.08 * u(rng);
  return v;
}

dsp::AudioBuffer synth_speech(const VoiceParams& voice, double seconds, std::uint64_t seed, int sample_rate) {
  if (!(seconds > 0.0)) throw std::invalid_argument("synth_speech: duration must be positive");
  const double fs = sample_rate;
  const auto total = static_cast<std::size_t>(std::lround(seconds * fs));
  Rng rng = seeded(seed, 0x5bee, static_cast<std::uint64_t>(voice.f0_hz * 1000.0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out;
  out.reserve(total + static_cast<std::size_t>(fs));
  while (out.size() < total) {
    const int syllables = 2 + static_cast<int>(u(rng) * 3.0);
    for (int s = 0; s < syllables; ++s) {
      const std::vector<double> syl = syllable(voice, rng, fs);
      const double gain = 0.6 + 0.4 * u(rng);
      for (double x : syl) out.push_back(gain * x);
    }
    out.resize(out.size() + static_cast<std::size_t>((0.1 + 0.4 * u(rng)) * fs), 0.0);
  }
  out.resize(total);
  double peak = 0.0;
  for (double x : out) peak = std::max(peak, std::abs(x));
  if (peak > 0.0) {
    for (double& x : out) x *= 0.5 / peak;
  }
  return dsp::AudioBuffer(std::move(out), sample_rate);
}

std::vector<SpeechSource> synth_speech_corpus(std::size_t n_speakers, double minutes_each, std::uint64_t seed,
                                              int sample_rate) {
  if (n_speakers == 0) throw std::invalid_argument("synth_speech_corpus: need at least one speaker");
  if (!(minutes_each > 0.0)) throw std::invalid_argument("synth_speech_corpus: minutes per speaker must be positive");
  std::vector<SpeechSource> corpus;
  for (std::size_t s = 0; s < n_speakers; ++s) {
    const std::string id = fmt::format("synth_spk{:02}", s);
    corpus.push_back({id, id + "_000", synth_speech(voice_for_speaker(s, seed), minutes_each * 60.0, seed + s, sample_rate)});
  }
  return corpus;
}

}  // namespace roomrelight::dataset
