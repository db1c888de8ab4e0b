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

#include "roomrelight/augment/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "roomrelight/augment/augmentation.hpp"
#include "roomrelight/dsp/filterbank.hpp"

namespace roomrelight::augment {

analysis::ImpulseResponse make_exponential_ir(const SyntheticIrSpec& spec) {
  const dsp::BandSet& bands = dsp::BandSet::t60();
  if (spec.t60_s.size() != bands.size()) throw std::invalid_argument("make_exponential_ir: need one T60 per band");
  if (!spec.band_gain_db.empty() && spec.band_gain_db.size() != bands.size()) {
    throw std::invalid_argument("make_exponential_ir: need one gain per band");
  }
  for (double t : spec.t60_s) {
    if (!(t > 0.0)) throw std::invalid_argument("make_exponential_ir: T60 values must be positive");
  }
  const int fs = spec.sample_rate;
  const auto n = static_cast<std::size_t>(std::lround(spec.duration_s * fs));
  const auto d = static_cast<std::size_t>(std::lround(spec.predelay_s * fs));
  if (d + 1 >= n) throw std::invalid_argument("make_exponential_ir: duration shorter than the predelay");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss;
  std::vector<double> noise(n, 0.0);
  for (std::size_t i = d; i < n; ++i) noise[i] = gauss(rng);
  const dsp::AudioBuffer excitation(std::move(noise), fs);

  const dsp::OctaveFilterbank bank(bands, fs);
  std::vector<double> h(n, 0.0);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const dsp::AudioBuffer y = bank.apply_band(excitation, b);
    const double gain = spec.band_gain_db.empty() ? 1.0 : std::pow(10.0, spec.band_gain_db[b] / 20.0);
    const double delta = 3.0 * std::log(10.0) / spec.t60_s[b];
    for (std::size_t i = d; i < n; ++i) {
      h[i] += gain * y[i] * std::exp(-delta * static_cast<double>(i - d) / fs);
    }
  }
  double peak = 0.0;
  for (double v : h) peak = std::max(peak, std::abs(v));
  h[d] = 3.0 * peak;
  analysis::ImpulseResponse ir(dsp::AudioBuffer(std::move(h), fs), d);
  if (spec.drr_db) return augment_drr(ir, *spec.drr_db);
  return ir;
}

analysis::ImpulseResponse make_exponential_ir(double t60_s, double duration_s, int sample_rate, std::uint64_t seed) {
  SyntheticIrSpec spec;
  spec.t60_s.assign(dsp::BandSet::t60().size(), t60_s);
  spec.duration_s = duration_s;
  spec.sample_rate = sample_rate;
  spec.seed = seed;
  return make_exponential_ir(spec);
}

}  // namespace roomrelight::augment
