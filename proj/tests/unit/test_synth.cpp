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

#include "roomrelight/analysis/eq.hpp"
#include "roomrelight/augment/synthetic.hpp"
#include "roomrelight/bench/pipeline.hpp"
#include "roomrelight/dsp/fir.hpp"
#include "roomrelight/dsp/spectrum.hpp"
#include "roomrelight/geo/image_source.hpp"
#include "roomrelight/synth/equalizer.hpp"
#include "roomrelight/synth/render.hpp"
#include "roomrelight/synth/synthesis.hpp"

using namespace roomrelight;
using analysis::ImpulseResponse;
using dsp::AudioBuffer;

namespace {

std::vector<geo::MaterialCoeffs> uniform_materials(std::size_t n, double rho) {
  std::vector<geo::MaterialCoeffs> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i].name = "m" + std::to_string(i);
    m[i].reflectivity.fill(rho);
  }
  return m;
}

geo::PathRecord direct_path(double distance) {
  geo::PathRecord p;
  p.distance = distance;
  p.arrival_time = distance / geo::kSpeedOfSound;
  p.bounce_counts = {0};
  return p;
}

AudioBuffer white_noise(double seconds, int fs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.05);
  std::vector<double> x(static_cast<std::size_t>(seconds * fs));
  for (double& v : x) v = n(rng);
  return AudioBuffer(std::move(x), fs);
}

const std::vector<double> kLevelBands{62.5, 125, 250, 500, 1000, 2000, 4000, 8000};

}  // namespace

TEST_CASE("IR synthesis from paths") {
  const auto mats = uniform_materials(1, 0.8);

  SUBCASE("a direct path 343 m away peaks at exactly one second") {
    const std::vector<geo::PathRecord> paths{direct_path(343.0)};
    const ImpulseResponse ir = synth::synthesize_ir(paths, mats, geo::AirModel::none());
    CHECK(ir.direct_index() == 16000);
    CHECK(analysis::peak_index(ir.samples()) == 16000);
  }

  SUBCASE("doubling every path energy scales samples by sqrt 2") {
    const geo::RoomModel room = geo::RoomModel::shoebox({4, 5, 3}, {0, 0, 0, 0, 0, 0}, mats);
    auto paths = geo::trace_image_source(room, {1, 1, 1}, {3, 3.5, 1.6}, 8);
    const ImpulseResponse a = synth::synthesize_ir(paths, mats, geo::AirModel::standard());
    for (auto& p : paths) p.weight *= 2.0;
    const ImpulseResponse b = synth::synthesize_ir(paths, mats, geo::AirModel::standard());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b.samples()[i] == doctest::Approx(std::sqrt(2.0) * a.samples()[i]));
  }

  SUBCASE("rates below 8 kHz are rejected, 8 kHz works") {
    const std::vector<geo::PathRecord> paths{direct_path(5.0)};
    synth::SynthesisOptions o;
    o.sample_rate = 4000;
    CHECK_THROWS_AS(synth::synthesize_ir(paths, mats, geo::AirModel::none(), o), std::invalid_argument);
    o.sample_rate = 8000;
    CHECK(synth::synthesize_ir(paths, mats, geo::AirModel::none(), o).sample_rate() == 8000);
  }

  SUBCASE("a room fitted to 0.6 s re-measures at 0.6 s") {
    const geo::Scene scene{geo::RoomModel::shoebox({4, 6, 3}, {0, 1, 2, 3, 4, 5}, uniform_materials(6, 0.8)),
                           {1.2, 1.5, 1.4},
                           {2.7, 4.1, 1.6}};
    bench::TraceSettings ts;
    ts.seed = 2;
    const auto paths = bench::trace_scene(scene, ts);
    const opt::AllBandsResult fit =
        opt::optimize_all_bands(paths, 6, dsp::BandProfile::uniform(dsp::BandSet::t60(), 0.6));
    REQUIRE(fit.all_ok());
    const bench::EnsembleT60 m =
        bench::measure_synthesized_t60(paths, fit.rendering_rho(), geo::AirModel::standard(), 8, 16000, 0);
    for (std::size_t b = 0; b < m.t60.size(); ++b) {
      REQUIRE(m.t60.valid(b));
      CHECK(m.t60.value(b) == doctest::Approx(0.6).epsilon(0.1));
    }
  }
}

TEST_CASE("EQ correction filter") {
  const int fs = 16000;
  const ImpulseResponse ir = augment::make_exponential_ir(0.5, 1.5, fs, 31);

  SUBCASE("filter length gives the 32 ms delay") {
    CHECK(synth::EqFilterSpec{}.taps(fs) == 1025);
    CHECK(synth::EqFilterSpec{}.taps(48000) == 3073);
  }

  SUBCASE("flat gains delay by 32 ms and leave the spectrum below the floor alone") {
    const ImpulseResponse out = synth::apply_eq(ir, synth::EqFilterSpec{});
    CHECK(out.direct_index() == ir.direct_index() + 512);
    const std::vector<double> bands{62.5, 125, 250, 500, 1000, 2000, 4000};
    const auto a = dsp::octave_band_levels_db(ir.samples(), fs, bands);
    const auto b = dsp::octave_band_levels_db(out.samples(), fs, bands);
    for (std::size_t i = 0; i + 1 < bands.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 0.1);
  }

  SUBCASE("the delta filter moves the EQ onto the target") {
    const dsp::BandProfile target(dsp::BandSet::eq(), {4, -2, 3, 1, -5, -8});
    const synth::EqFilterSpec spec = synth::EqFilterSpec::from_delta(target, analysis::extract_eq(ir));
    const dsp::BandProfile got = analysis::extract_eq(synth::apply_eq(ir, spec));
    for (std::size_t b = 0; b < got.size(); ++b) CHECK(std::abs(got.value(b) - target.value(b)) <= 2.0);
  }

  SUBCASE("the 8 kHz octave always drops by at least 40 dB") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-12.0, 12.0);
    const std::vector<double> top{8000.0};
    const double in = dsp::octave_band_levels_db(ir.samples(), fs, top)[0];
    for (int i = 0; i < 10; ++i) {
      synth::EqFilterSpec spec;
      for (double& g : spec.gains_db) g = u(rng);
      CHECK(in - dsp::octave_band_levels_db(synth::apply_eq(ir, spec).samples(), fs, top)[0] >= 40.0);
    }
  }

  SUBCASE("malformed specs") {
    synth::EqFilterSpec s;
    s.gains_db.resize(7, 0.0);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.delay_ms = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
}

TEST_CASE("rendering") {
  const int fs = 16000;
  const AudioBuffer dry = white_noise(3.0, fs, 17);

  SUBCASE("unit impulse passes the dry signal") {
    const synth::RenderResult r = synth::render(dry, ImpulseResponse(AudioBuffer({1.0}, fs)));
    REQUIRE(r.audio.size() == dry.size());
    for (std::size_t i = 0; i < dry.size(); ++i) CHECK(r.audio[i] == doctest::Approx(dry[i]));
    CHECK(r.normalization == 1.0);
  }

  SUBCASE("zero wet gain is silence") {
    const synth::RenderResult r = synth::render(dry, augment::make_exponential_ir(0.4, 1.0, fs, 1), 0.0);
    CHECK(r.audio.peak_abs() == 0.0);
  }

  SUBCASE("output band levels are dry levels plus the IR band gains") {
    const std::vector<double> gains{3, -6, 5, -2, 4, -4};
    const dsp::FirFilter f = dsp::design_fir_gains(dsp::BandProfile(dsp::BandSet::eq(), gains), 1023, fs);
    const ImpulseResponse ir(f.as_buffer(), f.delay_samples);
    const synth::RenderResult r = synth::render(dry, ir);
    const auto centers = dsp::BandSet::eq().centers();
    const auto in = dsp::octave_band_levels_db(dry.samples(), fs, centers);
    const auto out = dsp::octave_band_levels_db(r.audio.samples(), fs, centers);
    for (std::size_t b = 0; b < gains.size(); ++b) CHECK(std::abs(out[b] - in[b] - gains[b]) <= 1.5);
  }

  SUBCASE("loud results are peak normalized") {
    const synth::RenderResult r = synth::render(dry.scaled(20.0), ImpulseResponse(AudioBuffer({1.0}, fs)));
    CHECK(r.audio.peak_abs() == doctest::Approx(1.0));
    CHECK(r.normalization < 1.0);
  }

  SUBCASE("rate mismatch") {
    CHECK_THROWS_AS(synth::render(dry, ImpulseResponse(AudioBuffer({1.0}, 8000))), std::invalid_argument);
  }
}

TEST_CASE("dB envelope") {
  const ImpulseResponse ir = augment::make_exponential_ir(0.5, 1.0, 16000, 2);
  const auto env = synth::db_envelope(ir, 0.01);
  CHECK(env.size() == 100);
  double peak = -1e9;
  for (const auto& p : env) peak = std::max(peak, p.level_db);
  CHECK(peak == 0.0);
  // 0.2 s to 0.4 s is 24 dB of decay at T60 0.5 s.
  CHECK((env[20].level_db - env[40].level_db) == doctest::Approx(24.0).epsilon(0.25));
}
