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

#include "roomrelight/dataset/example.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/analysis/eq.hpp"
#include "roomrelight/dsp/convolve.hpp"
#include "roomrelight/dsp/features.hpp"
#include "roomrelight/dsp/wav.hpp"

namespace roomrelight::dataset {
namespace {

dsp::AudioBuffer at_feature_rate(const dsp::AudioBuffer& x) {
  return x.sample_rate() == kFeatureRate ? x : dsp::resample(x, kFeatureRate);
}

double mean_power(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

}  // namespace

IrLabels measure_labels(const analysis::ImpulseResponse& ir) {
  std::optional<dsp::BandProfile> t60;
  try {
    t60 = analysis::estimate_t60(ir, dsp::BandSet::t60());
  } catch (const analysis::T60EstimationError& e) {
    t60 = e.profile();
  }
  return {*t60, analysis::extract_eq(ir, dsp::BandSet::eq())};
}

analysis::ImpulseResponse to_feature_rate(const analysis::ImpulseResponse& ir) {
  if (ir.sample_rate() == kFeatureRate) return ir;
  const dsp::AudioBuffer x = dsp::resample(ir.buffer(), kFeatureRate);
  const auto d = static_cast<std::size_t>(
      std::lround(static_cast<double>(ir.direct_index()) * kFeatureRate / ir.sample_rate()));
  return analysis::ImpulseResponse(x, std::min(d, x.size() - 1));
}

Example make_example(const dsp::AudioBuffer& speech, const analysis::ImpulseResponse& ir,
                     const dsp::AudioBuffer* noise, double snr_db, std::mt19937_64& rng,
                     const ExampleOptions& options) {
  const analysis::ImpulseResponse ir16 = to_feature_rate(ir);
  return make_example(speech, ir16, measure_labels(ir16), noise, snr_db, rng, options);
}

Example make_example(const dsp::AudioBuffer& speech, const analysis::ImpulseResponse& ir, const IrLabels& labels,
                     const dsp::AudioBuffer* noise, double snr_db, std::mt19937_64& rng,
                     const ExampleOptions& options) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("make_example: SNR must be finite or +inf");
  }
  const auto clip = static_cast<std::size_t>(std::lround(options.clip_s * kFeatureRate));
  const dsp::AudioBuffer dry = at_feature_rate(speech);
  if (dry.size() < clip) {
    throw std::invalid_argument(fmt::format("make_example: speech is {:.2f} s, shorter than the {:.2f} s clip",
                                            dry.duration_seconds(), options.clip_s));
  }
  const analysis::ImpulseResponse ir16 = to_feature_rate(ir);
  const dsp::AudioBuffer wet = dsp::convolve(dry, ir16.buffer());

  const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(options.window_step_s * kFeatureRate)));
  const double gate = std::pow(10.0, options.gate_dbfs / 10.0);
  std::vector<std::size_t> active;
  for (std::size_t s = 0; s + clip <= wet.size(); s += step) {
    if (mean_power(wet.samples().subspan(s, clip)) >= gate) active.push_back(s);
  }
  if (active.empty()) {
    throw std::runtime_error(fmt::format("make_example: no {:.1f} s window reaches {:.0f} dBFS RMS",
                                         options.clip_s, options.gate_dbfs));
  }
  const std::size_t start = active[std::uniform_int_distribution<std::size_t>(0, active.size() - 1)(rng)];
  std::vector<double> x(wet.samples().begin() + static_cast<std::ptrdiff_t>(start),
                        wet.samples().begin() + static_cast<std::ptrdiff_t>(start + clip));
  double measured_snr = std::numeric_limits<double>::infinity();

  if (std::isfinite(snr_db)) {
    std::vector<double> n(clip);
    if (noise != nullptr && !noise->empty()) {
      const dsp::AudioBuffer nz = at_feature_rate(*noise);
      std::size_t pos = std::uniform_int_distribution<std::size_t>(0, nz.size() - 1)(rng);
      for (double& v : n) {
        v = nz[pos];
        pos = (pos + 1) % nz.size();
      }
    } else {
      std::normal_distribution<double> g(0.0, 1.0);
      for (double& v : n) v = g(rng);
    }
    const double pn = mean_power(n);
    if (!(pn > 0.0)) throw std::invalid_argument("make_example: noise segment is silent");
    const double ps = mean_power(x);
    const double scale = std::sqrt(ps / (pn * std::pow(10.0, snr_db / 10.0)));
    for (std::size_t i = 0; i < clip; ++i) x[i] += scale * n[i];
    measured_snr = 10.0 * std::log10(ps / (scale * scale * pn));
  }
  const dsp::Spectrogram spec =
      dsp::log_mel_features(dsp::AudioBuffer(std::move(x), kFeatureRate), options.n_mel, options.fft_window, options.overlap);
  return Example{FeatureTensor::from_matrix(spec.values), labels, snr_db, measured_snr, start};
}

}  // namespace roomrelight::dataset
