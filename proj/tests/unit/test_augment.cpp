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
#include "roomrelight/augment/augmentation.hpp"
#include "roomrelight/augment/corpus.hpp"
#include "roomrelight/augment/synthetic.hpp"
#include "roomrelight/dsp/fir.hpp"

using namespace roomrelight;
using analysis::ImpulseResponse;
using dsp::AudioBuffer;

namespace {

ImpulseResponse filtered_impulse(const std::vector<double>& gains) {
  const dsp::FirFilter f = dsp::design_fir_gains(dsp::BandProfile(dsp::BandSet::eq(), gains), 1023, 16000);
  return ImpulseResponse(f.as_buffer(), f.delay_samples);
}

ImpulseResponse unit_impulse() {
  std::vector<double> h(4000, 0.0);
  h[200] = 1.0;
  return ImpulseResponse(AudioBuffer(std::move(h), 16000));
}

double mean_band_t60(const ImpulseResponse& ir) {
  const dsp::BandProfile p = analysis::estimate_t60(ir, dsp::BandSet::t60());
  double sum = 0.0;
  int n = 0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (!p.valid(b)) continue;
    sum += p.value(b);
    ++n;
  }
  return sum / n;
}

}  // namespace

TEST_CASE("fit_eq_distribution") {
  SUBCASE("identical IRs have zero spread") {
    const ImpulseResponse ir = augment::make_exponential_ir(0.5, 1.0, 16000, 5);
    const std::vector<ImpulseResponse> corpus(4, ir);
    const augment::EqDistribution d = augment::fit_eq_distribution(corpus);
    const dsp::BandProfile eq = analysis::extract_eq(ir);
    for (std::size_t b = 0; b < eq.size(); ++b) {
      CHECK(d.std_db[b] == doctest::Approx(0.0));
      CHECK(d.mean_db[b] == doctest::Approx(eq.value(b)));
    }
  }

  SUBCASE("a symmetric two-point population") {
    const std::vector<double> g{4, -3, 5, 2, -6, 3};
    std::vector<double> neg(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) neg[i] = -g[i];
    std::vector<ImpulseResponse> corpus;
    for (int i = 0; i < 10; ++i) corpus.push_back(filtered_impulse(i % 2 ? g : neg));
    const augment::EqDistribution d = augment::fit_eq_distribution(corpus);
    for (std::size_t b = 0; b < g.size(); ++b) {
      CHECK(std::abs(d.mean_db[b]) <= 0.5);
      CHECK(d.std_db[b] == doctest::Approx(std::abs(g[b])).epsilon(0.1));
    }
  }

  SUBCASE("a single IR is not a distribution") {
    const std::vector<ImpulseResponse> one{unit_impulse()};
    CHECK_THROWS_AS(augment::fit_eq_distribution(one), std::invalid_argument);
  }
}

TEST_CASE("augment_eq") {
  SUBCASE("target equal to the current EQ leaves the spectrum alone") {
    const ImpulseResponse ir = augment::make_exponential_ir(0.4, 1.0, 16000, 8);
    const dsp::BandProfile eq = analysis::extract_eq(ir);
    augment::EqDistribution model{std::vector<double>(eq.values().begin(), eq.values().end()),
                                  std::vector<double>(eq.size(), 0.0)};
    augment::Rng rng(1);
    const augment::EqAugmentation out = augment::augment_eq(ir, model, 1.0, rng);
    const dsp::BandProfile after = analysis::extract_eq(out.ir);
    for (std::size_t b = 0; b < eq.size(); ++b) CHECK(std::abs(after.value(b) - eq.value(b)) < 0.5);
  }

  SUBCASE("unit impulse pushed to +6 dB at 62.5 Hz") {
    augment::EqDistribution model{{6, 0, 0, 0, 0, 0}, std::vector<double>(6, 0.0)};
    augment::Rng rng(2);
    const augment::EqAugmentation out = augment::augment_eq(unit_impulse(), model, 1.0, rng);
    const dsp::BandProfile got = analysis::extract_eq(out.ir);
    for (std::size_t b = 0; b < got.size(); ++b) CHECK(std::abs(got.value(b) - model.mean_db[b]) <= 1.5);
  }

  SUBCASE("same seed, same output") {
    const ImpulseResponse ir = augment::make_exponential_ir(0.4, 1.0, 16000, 8);
    augment::EqDistribution model{{1, 2, 0, -1, -2, 1}, {3, 3, 3, 3, 3, 3}};
    augment::Rng a(77), b(77);
    const auto x = augment::augment_eq(ir, model, 1.25, a);
    const auto y = augment::augment_eq(ir, model, 1.25, b);
    REQUIRE(x.ir.size() == y.ir.size());
    for (std::size_t i = 0; i < x.ir.size(); ++i) REQUIRE(x.ir.samples()[i] == y.ir.samples()[i]);
  }
}

TEST_CASE("augment_t60") {
  SUBCASE("target equal to the measured T60 is the identity") {
    const ImpulseResponse ir = augment::make_exponential_ir(0.6, 1.5, 16000, 3);
    const double t = analysis::fullband_decay(ir).t60;
    const ImpulseResponse out = augment::augment_t60(ir, t);
    for (std::size_t i = 0; i < ir.size(); ++i) REQUIRE(out.samples()[i] == ir.samples()[i]);
  }

  SUBCASE("0.8 s shortened to 0.4 s") {
    const ImpulseResponse out = augment::augment_t60(augment::make_exponential_ir(0.8, 2.0, 16000, 4), 0.4);
    CHECK(analysis::fullband_decay(out).t60 == doctest::Approx(0.4).epsilon(0.1));
    CHECK(mean_band_t60(out) == doctest::Approx(0.4).epsilon(0.1));
  }

  SUBCASE("0.5 s lengthened to 1.5 s") {
    const ImpulseResponse out = augment::augment_t60(augment::make_exponential_ir(0.5, 2.5, 16000, 5), 1.5);
    CHECK(analysis::fullband_decay(out).t60 == doctest::Approx(1.5).epsilon(0.1));
    CHECK(mean_band_t60(out) == doctest::Approx(1.5).epsilon(0.1));
  }

  SUBCASE("non-positive target") {
    CHECK_THROWS_AS(augment::augment_t60(augment::make_exponential_ir(0.5, 1.0, 16000, 5), 0.0), std::invalid_argument);
  }
}

TEST_CASE("augment_drr") {
  const int fs = 16000;
  std::vector<double> h(4000, 0.0);
  h[100] = 1.0;
  h[260] = 1.0;  // 10 ms later
  const ImpulseResponse pair(AudioBuffer(h, fs), 100);

  SUBCASE("current DRR is the identity") {
    const ImpulseResponse ir = augment::make_exponential_ir(0.5, 1.0, fs, 6);
    const ImpulseResponse out = augment::augment_drr(ir, analysis::compute_drr(ir).db);
    for (std::size_t i = 0; i < ir.size(); ++i) CHECK(out.samples()[i] == doctest::Approx(ir.samples()[i]));
  }

  SUBCASE("+20 dB scales the direct spike by 10") {
    const ImpulseResponse out = augment::augment_drr(pair, 20.0);
    CHECK(out.samples()[100] == doctest::Approx(10.0));
    CHECK(out.samples()[260] == 1.0);
  }

  SUBCASE("room-like IR to 0 dB") {
    const ImpulseResponse out = augment::augment_drr(augment::make_exponential_ir(0.7, 1.5, fs, 12), 0.0);
    CHECK(std::abs(analysis::compute_drr(out).db) <= 0.5);
  }

  SUBCASE("no reverberant energy") {
    std::vector<double> d(1000, 0.0);
    d[10] = 1.0;
    CHECK_THROWS_AS(augment::augment_drr(ImpulseResponse(AudioBuffer(d, fs)), 0.0), std::runtime_error);
  }
}

TEST_CASE("build_augmented_corpus") {
  std::vector<ImpulseResponse> sources;
  for (int i = 0; i < 4; ++i) sources.push_back(augment::make_exponential_ir(0.4 + 0.15 * i, 2.5, 16000, 90 + i));

  augment::AugmentationSpec spec;
  spec.eq_model = augment::fit_eq_distribution(sources);
  spec.count = 56;
  spec.seed = 5;

  SUBCASE("balanced over the T60 grid and honestly labelled") {
    const auto items = augment::build_augmented_corpus(sources, spec);
    REQUIRE(items.size() == spec.count);
    std::vector<int> per_bin(static_cast<std::size_t>(spec.t60_grid), 0);
    for (const auto& e : items) {
      per_bin[augment::target_bin(e.index, spec)]++;
      CHECK(e.t60_fullband == doctest::Approx(analysis::fullband_decay(e.ir).t60));
      CHECK(std::abs(e.t60_fullband / e.target_t60 - 1.0) <= 0.1);
    }
    for (int c : per_bin) CHECK(c == 4);
  }

  SUBCASE("one source and a zero-spread EQ model only changes the decay") {
    augment::AugmentationSpec s = spec;
    s.count = 10;
    s.augment_drr = false;
    const std::vector<ImpulseResponse> one{sources[0]};
    const dsp::BandProfile eq = analysis::extract_eq(sources[0]);
    s.eq_model = {std::vector<double>(eq.values().begin(), eq.values().end()), std::vector<double>(eq.size(), 0.0)};
    const auto items = augment::build_augmented_corpus(one, s);
    REQUIRE(items.size() == 10);
    for (const auto& e : items) {
      CHECK(e.source_index == 0);
      for (std::size_t b = 0; b < eq.size(); ++b) CHECK(e.target_eq.value(b) == doctest::Approx(eq.value(b)));
    }
  }

  SUBCASE("deterministic for a seed") {
    augment::AugmentationSpec s = spec;
    s.count = 8;
    const auto a = augment::build_augmented_corpus(sources, s);
    const auto b = augment::build_augmented_corpus(sources, s);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].target_t60 == b[i].target_t60);
      CHECK(a[i].t60_fullband == b[i].t60_fullband);
      CHECK(std::equal(a[i].ir.samples().begin(), a[i].ir.samples().end(), b[i].ir.samples().begin()));
    }
  }

  SUBCASE("malformed spec") {
    augment::AugmentationSpec s = spec;
    s.t60_lo = 2.0;
    CHECK_THROWS_AS(augment::build_augmented_corpus(sources, s), std::invalid_argument);
  }
}
