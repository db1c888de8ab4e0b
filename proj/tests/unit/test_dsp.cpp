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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "roomrelight/analysis/eq.hpp"
#include "roomrelight/dsp/audio.hpp"
#include "roomrelight/dsp/bands.hpp"
#include "roomrelight/dsp/convolve.hpp"
#include "roomrelight/dsp/features.hpp"
#include "roomrelight/dsp/filterbank.hpp"
#include "roomrelight/dsp/fir.hpp"
#include "roomrelight/dsp/spectrum.hpp"

using namespace roomrelight;
using dsp::AudioBuffer;

namespace {

AudioBuffer white_noise(double seconds, int fs, std::uint64_t seed, double sigma = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  std::vector<double> x(static_cast<std::size_t>(seconds * fs));
  for (double& v : x) v = n(rng);
  return AudioBuffer(std::move(x), fs);
}

AudioBuffer sine(double hz, double seconds, int fs) {
  std::vector<double> x(static_cast<std::size_t>(seconds * fs));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
  return AudioBuffer(std::move(x), fs);
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

// |H(f)| of an FIR by direct DTFT evaluation.
double fir_magnitude_db(const dsp::FirFilter& f, double hz) {
  std::complex<double> h = 0.0;
  for (std::size_t n = 0; n < f.taps.size(); ++n) {
    h += f.taps[n] * std::polar(1.0, -2.0 * std::numbers::pi * hz * static_cast<double>(n) / f.sample_rate);
  }
  return dsp::amplitude_to_db(std::abs(h));
}

}  // namespace

TEST_CASE("audio buffer invariants") {
  const AudioBuffer a({0.0, 1.0, -2.0, 0.5}, 8);
  CHECK(a.duration_seconds() == doctest::Approx(0.5));
  CHECK(a.peak_abs() == 2.0);
  CHECK_THROWS_AS(AudioBuffer({0.0, std::nan("")}, 8), std::invalid_argument);
  CHECK_THROWS_AS(AudioBuffer({0.0}, 0), std::invalid_argument);
  CHECK(a.segment(3, 3).size() == 3);
  CHECK(a.segment(3, 3)[1] == 0.0);
}

TEST_CASE("band sets are the two canonical sets") {
  const auto t60 = dsp::BandSet::t60().centers();
  const auto eq = dsp::BandSet::eq().centers();
  CHECK(std::vector<double>(t60.begin(), t60.end()) == std::vector<double>{125, 250, 500, 1000, 2000, 4000, 8000});
  CHECK(std::vector<double>(eq.begin(), eq.end()) == std::vector<double>{62.5, 125, 250, 500, 2000, 4000});
  CHECK(dsp::BandSet::t60().index_of(1000.0) == 3u);
  CHECK_FALSE(dsp::BandSet::eq().index_of(1000.0).has_value());
  CHECK_THROWS_AS(dsp::BandProfile(dsp::BandSet::eq(), {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("octave filterbank") {
  const int fs = 16000;
  const dsp::BandSet& bands = dsp::BandSet::t60();

  SUBCASE("a 1 kHz sine lands in the 1 kHz band") {
    const auto out = dsp::octave_filterbank(sine(1000.0, 1.0, fs), bands);
    double total = 0.0;
    for (const auto& b : out) total += energy(b.samples());
    CHECK(energy(out[3].samples()) / total >= 0.9);
  }

  SUBCASE("silence stays silent") {
    for (const auto& b : dsp::octave_filterbank(AudioBuffer::zeros(4000, fs), bands)) CHECK(b.peak_abs() == 0.0);
  }

  SUBCASE("white noise energy is preserved across 125-8000 Hz") {
    const AudioBuffer x = white_noise(10.0, fs, 7);
    double sum = 0.0;
    for (const auto& b : dsp::octave_filterbank(x, bands)) sum += energy(b.samples());
    // The bank spans 88 Hz to Nyquist; compare against the input energy in that range.
    const double in_span = energy(x.samples()) * (8000.0 - 125.0 / std::sqrt(2.0)) / 8000.0;
    CHECK(std::abs(dsp::power_to_db(sum / in_span)) < 1.0);
  }

  SUBCASE("a band above Nyquist is rejected") {
    CHECK_THROWS_AS(dsp::OctaveFilterbank(bands, 8000), std::invalid_argument);
  }

  SUBCASE("designed bands pass their center at unity to within 0.001 dB") {
    const dsp::OctaveFilterbank fb(bands, fs);
    for (std::size_t b = 0; b + 1 < fb.size(); ++b) {
      CHECK(std::abs(fb.response(b, fb.center(b))) == doctest::Approx(1.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("log-mel features") {
  const int fs = 16000;
  SUBCASE("four seconds of silence is a 32x499 floor") {
    const dsp::Spectrogram s = dsp::log_mel_features(AudioBuffer::zeros(4 * fs, fs));
    CHECK(s.values.rows() == 32);
    CHECK(s.values.cols() == 499);
    CHECK(s.values.maxCoeff() == dsp::kMelFloorDb);
    CHECK(s.values.minCoeff() == dsp::kMelFloorDb);
  }
  SUBCASE("a four second clip is 32x499 and finite") {
    const dsp::Spectrogram s = dsp::log_mel_features(white_noise(4.0, fs, 3));
    CHECK(s.values.rows() == 32);
    CHECK(s.values.cols() == 499);
    CHECK(s.values.allFinite());
  }
  SUBCASE("ten times the amplitude adds exactly 20 dB") {
    const AudioBuffer x = white_noise(4.0, fs, 4);
    const dsp::Spectrogram a = dsp::log_mel_features(x);
    const dsp::Spectrogram b = dsp::log_mel_features(x.scaled(10.0));
    CHECK((b.values - a.values).array().maxCoeff() == doctest::Approx(20.0).epsilon(1e-9));
    CHECK((b.values - a.values).array().minCoeff() == doctest::Approx(20.0).epsilon(1e-9));
  }
  SUBCASE("a clip shorter than one window is an error") {
    CHECK_THROWS_AS(dsp::log_mel_features(AudioBuffer::zeros(100, fs)), std::invalid_argument);
  }
}

TEST_CASE("FIR design from band gains") {
  const int fs = 16000;
  const dsp::BandSet& eq = dsp::BandSet::eq();

  SUBCASE("flat gains give a delayed unit impulse") {
    const dsp::FirFilter f = dsp::design_fir_gains(dsp::BandProfile::uniform(eq, 0.0), 1023, fs);
    CHECK(f.delay_samples == 511);
    for (double c : eq.centers()) CHECK(std::abs(fir_magnitude_db(f, c)) < 0.1);
    CHECK(std::abs(fir_magnitude_db(f, 1000.0)) < 0.1);
  }

  SUBCASE("taps are symmetric about the center") {
    const dsp::FirFilter f = dsp::design_fir_gains(dsp::BandProfile(eq, {3, -4, 6, 1, -9, 2}), 1023, fs);
    double peak = 0.0;
    for (double t : f.taps) peak = std::max(peak, std::abs(t));
    for (std::size_t i = 0; i < f.taps.size(); ++i) {
      CHECK(std::abs(f.taps[i] - f.taps[f.taps.size() - 1 - i]) <= 1e-9 * peak);
    }
    CHECK(f.delay_samples == (f.taps.size() - 1) / 2);
  }

  SUBCASE("+6 dB at 500 Hz") {
    const dsp::FirFilter f = dsp::design_fir_gains(dsp::BandProfile(eq, {0, 0, 0, 6, 0, 0}), 1023, fs);
    CHECK(fir_magnitude_db(f, 500.0) == doctest::Approx(6.0).epsilon(0.25));
  }

  SUBCASE("design then extract recovers the gains") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-12.0, 12.0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> g(eq.size());
      for (double& v : g) v = u(rng);
      const dsp::FirFilter f = dsp::design_fir_gains(dsp::BandProfile(eq, g), 1023, fs);
      const dsp::BandProfile got = analysis::extract_eq(analysis::ImpulseResponse(f.as_buffer(), f.delay_samples));
      for (std::size_t b = 0; b < eq.size(); ++b) CHECK(std::abs(got.value(b) - g[b]) <= 1.5);
    }
  }
}

TEST_CASE("convolution") {
  const int fs = 16000;
  const AudioBuffer x = white_noise(1.0, fs, 21);

  SUBCASE("unit impulse is the identity") {
    const AudioBuffer y = dsp::convolve(x, AudioBuffer({1.0}, fs));
    REQUIRE(y.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) < 1e-9);
  }

  SUBCASE("impulse pair adds a delayed copy") {
    const std::size_t k = 37;
    std::vector<double> h(k + 1, 0.0);
    h[0] = 1.0;
    h[k] = 1.0;
    const AudioBuffer y = dsp::convolve(x, AudioBuffer(h, fs));
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double want = x[n] + (n >= k ? x[n - k] : 0.0);
      CHECK(std::abs(y[n] - want) < 1e-9);
    }
  }

  SUBCASE("FFT and direct paths agree") {
    const AudioBuffer h = white_noise(1.0, fs, 22);
    const auto a = dsp::convolve_direct(x.samples(), h.samples());
    const auto b = dsp::convolve_fft(x.samples(), h.samples());
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst < 1e-6);
  }

  SUBCASE("mismatched rates are rejected") {
    CHECK_THROWS_AS(dsp::convolve(x, AudioBuffer({1.0}, 8000)), std::invalid_argument);
  }
}
