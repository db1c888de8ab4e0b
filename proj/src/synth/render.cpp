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

#include "roomrelight/synth/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "roomrelight/dsp/convolve.hpp"

namespace roomrelight::synth {

RenderResult render(const dsp::AudioBuffer& dry, const analysis::ImpulseResponse& ir, double wet_gain,
                    double dry_gain) {
  if (dry.sample_rate() != ir.sample_rate()) {
    throw std::invalid_argument(fmt::format("render: dry audio is {} Hz but the IR is {} Hz; resample first",
                                            dry.sample_rate(), ir.sample_rate()));
  }
  if (!std::isfinite(wet_gain) || !std::isfinite(dry_gain)) throw std::invalid_argument("render: non-finite gain");
  dsp::AudioBuffer out = dsp::convolve(dry, ir.buffer()).scaled(wet_gain);
  if (dry_gain != 0.0) out = dsp::mix(out, dry.scaled(dry_gain));
  RenderResult res;
  const double peak = out.peak_abs();
  if (peak > 1.0) {
    res.normalization = 1.0 / peak;
    out = out.scaled(res.normalization);
  }
  res.audio = std::move(out);
  return res;
}

std::vector<EnvelopePoint> db_envelope(const analysis::ImpulseResponse& ir, double frame_s) {
  const auto frame = static_cast<std::size_t>(std::max(1L, std::lround(frame_s * ir.sample_rate())));
  const auto x = ir.samples();
  std::vector<double> energy;
  for (std::size_t i = 0; i < x.size(); i += frame) {
    double e = 0.0;
    for (std::size_t k = i; k < std::min(x.size(), i + frame); ++k) e += x[k] * x[k];
    energy.push_back(e);
  }
  const double peak = *std::max_element(energy.begin(), energy.end());
  std::vector<EnvelopePoint> out;
  out.reserve(energy.size());
  for (std::size_t f = 0; f < energy.size(); ++f) {
    const double db = energy[f] > 0.0 ? 10.0 * std::log10(energy[f] / peak) : -std::numeric_limits<double>::infinity();
    out.push_back({static_cast<double>(f * frame) / ir.sample_rate(), db});
  }
  return out;
}

}  // namespace roomrelight::synth
