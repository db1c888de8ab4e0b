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
#include <random>
#include <vector>

#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/analysis/drr.hpp"
#include "roomrelight/analysis/eq.hpp"
#include "roomrelight/augment/synthetic.hpp"
#include "roomrelight/dsp/fir.hpp"

using namespace roomrelight;
using analysis::ImpulseResponse;
using dsp::AudioBuffer;

namespace {

ImpulseResponse unit_impulse(std::size_t length = 8000, std::size_t at = 100, int fs = 16000) {
  std::vector<double> h(length, 0.0);
  h[at] = 1.0;
  return ImpulseResponse(AudioBuffer(std::move(h), fs));
}

}  // namespace

TEST_CASE("impulse response picks the peak as the direct arrival") {
  std::vector<double> h(1000, 0.0);
  h[40] = 0.5;
  h[90] = -0.9;
  CHECK(ImpulseResponse(AudioBuffer(h, 16000)).direct_index() == 90);
  CHECK(ImpulseResponse(AudioBuffer(h, 16000), 40).direct_index() == 40);
  CHECK_THROWS_AS(ImpulseResponse(AudioBuffer(std::vector<double>(10, 0.0), 16000)), std::invalid_argument);
  CHECK_THROWS_AS(ImpulseResponse(AudioBuffer(h, 16000), 5000), std::invalid_argument);
}

TEST_CASE("decay fit on an exact exponential energy curve") {
  // Energy falling 60 dB per 0.4 s with a clean line: slope -150 dB/s.
  const double rate = 1000.0;
  std::vector<double> e(1200);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::pow(10.0, -150.0 * (static_cast<double>(i) / rate) / 10.0);
  const analysis::DecayFit fit = analysis::fit_decay(e, rate, 0);
  REQUIRE(fit.valid);
  CHECK(fit.slope_db_per_s == doctest::Approx(-150.0).epsilon(0.01));
  CHECK(fit.t60 == doctest::Approx(0.4).epsilon(0.01));
  CHECK(fit.t60 == doctest::Approx(-60.0 / fit.slope_db_per_s));
}

TEST_CASE("estimate_t60") {
  SUBCASE("exponential noise IR with T60 0.5 s in every band") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const ImpulseResponse ir = augment::make_exponential_ir(0.5, 2.0, 16000, seed);
      const dsp::BandProfile t60 = analysis::estimate_t60(ir, dsp::BandSet::t60());
      for (std::size_t b = 0; b < t60.size(); ++b) {
        REQUIRE(t60.valid(b));
        // A single noise realization scatters; the ensemble check lives in the acceptance suite.
        CHECK(t60.value(b) == doctest::Approx(0.5).epsilon(0.2));
      }
    }
  }

  SUBCASE("unit impulse has nothing to fit") {
    try {
      (void)analysis::estimate_t60(unit_impulse(), dsp::BandSet::t60());
      FAIL("expected T60EstimationError");
    } catch (const analysis::T60EstimationError& e) {
      CHECK_FALSE(e.profile().any_valid());
    }
  }

  SUBCASE("decay twice as fast above 1 kHz") {
    augment::SyntheticIrSpec spec;
    spec.t60_s = {0.8, 0.8, 0.8, 0.8, 0.4, 0.4, 0.4};
    spec.duration_s = 2.0;
    double low = 0.0, high = 0.0;
    const int seeds = 8;
    for (int s = 0; s < seeds; ++s) {
      spec.seed = 40 + static_cast<std::uint64_t>(s);
      const auto fits = analysis::analyze_decay(augment::make_exponential_ir(spec), dsp::BandSet::t60());
      low += fits[2].slope_db_per_s;   // 500 Hz
      high += fits[5].slope_db_per_s;  // 4 kHz
    }
    CHECK((low / high) == doctest::Approx(0.5).epsilon(0.05));
  }
}

TEST_CASE("extract_eq") {
  SUBCASE("unit impulse is flat") {
    const dsp::BandProfile eq = analysis::extract_eq(unit_impulse());
    for (std::size_t b = 0; b < eq.size(); ++b) CHECK(std::abs(eq.value(b)) < 0.05);
  }

  SUBCASE("+6 dB at 250 Hz through a designed filter") {
    const dsp::FirFilter f =
        dsp::design_fir_gains(dsp::BandProfile(dsp::BandSet::eq(), {0, 0, 6, 0, 0, 0}), 1023, 16000);
    const dsp::BandProfile eq = analysis::extract_eq(ImpulseResponse(f.as_buffer(), f.delay_samples));
    for (std::size_t b = 0; b < eq.size(); ++b) CHECK(std::abs(eq.value(b) - (b == 2 ? 6.0 : 0.0)) <= 1.5);
  }

  SUBCASE("scale invariant") {
    const ImpulseResponse ir = augment::make_exponential_ir(0.6, 1.5, 16000, 9);
    const dsp::BandProfile a = analysis::extract_eq(ir);
    const dsp::BandProfile b = analysis::extract_eq(ImpulseResponse(ir.buffer().scaled(37.5), ir.direct_index()));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.value(i) == doctest::Approx(b.value(i)).epsilon(1e-9));
  }
}

TEST_CASE("compute_drr") {
  const int fs = 16000;
  const std::size_t ten_ms = 160;

  SUBCASE("lone impulse is anechoic") {
    const analysis::DrrResult r = analysis::compute_drr(unit_impulse());
    CHECK(r.anechoic);
    CHECK(std::isinf(r.db));
  }

  SUBCASE("equal direct and reflection") {
    std::vector<double> h(4000, 0.0);
    h[100] = 1.0;
    h[100 + ten_ms] = 1.0;
    CHECK(analysis::compute_drr(ImpulseResponse(AudioBuffer(h, fs), 100)).db == doctest::Approx(0.0));
  }

  SUBCASE("reflection at one tenth amplitude") {
    std::vector<double> h(4000, 0.0);
    h[100] = 1.0;
    h[100 + ten_ms] = 0.1;
    CHECK(analysis::compute_drr(ImpulseResponse(AudioBuffer(h, fs))).db == doctest::Approx(20.0));
  }
}
