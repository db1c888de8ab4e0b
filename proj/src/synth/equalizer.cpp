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

#include "roomrelight/synth/equalizer.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "roomrelight/dsp/convolve.hpp"

namespace roomrelight::synth {

EqFilterSpec EqFilterSpec::from_delta(const dsp::BandProfile& target, const dsp::BandProfile& simulated) {
  if (!(target.bands() == dsp::BandSet::eq()) || !(simulated.bands() == dsp::BandSet::eq())) {
    throw std::invalid_argument("EqFilterSpec::from_delta: profiles must be over the EQ band set");
  }
  EqFilterSpec spec;
  for (std::size_t b = 0; b < dsp::kNumEqBands; ++b) {
    spec.gains_db[b] = target.valid(b) && simulated.valid(b) ? target.value(b) - simulated.value(b) : 0.0;
  }
  return spec;
}

std::size_t EqFilterSpec::taps(int sample_rate) const {
  return 2 * static_cast<std::size_t>(std::lround(delay_ms * 1e-3 * sample_rate)) + 1;
}

void EqFilterSpec::validate() const {
  if (gains_db.size() != dsp::kNumEqBands) {
    throw std::invalid_argument(
        fmt::format("EqFilterSpec: expected {} gains, got {}", dsp::kNumEqBands, gains_db.size()));
  }
  for (double g : gains_db) {
    if (!std::isfinite(g)) throw std::invalid_argument("EqFilterSpec: non-finite gain");
  }
  if (!(delay_ms > 0.0) || !std::isfinite(delay_ms)) throw std::invalid_argument("EqFilterSpec: delay must be positive");
  if (!std::isfinite(highband_floor_db)) throw std::invalid_argument("EqFilterSpec: non-finite high-band floor");
}

dsp::FirFilter design_eq_filter(const EqFilterSpec& spec, int sample_rate) {
  spec.validate();
  dsp::FirDesignOptions opt;
  opt.taps = spec.taps(sample_rate);
  opt.sample_rate = sample_rate;
  opt.shelf_db = spec.highband_floor_db;
  opt.shelf_start_hz = kHighBandFloorStartHz;
  return dsp::design_fir_gains(dsp::BandProfile(dsp::BandSet::eq(), spec.gains_db), opt);
}

analysis::ImpulseResponse apply_eq(const analysis::ImpulseResponse& ir, const EqFilterSpec& spec) {
  const dsp::FirFilter fir = design_eq_filter(spec, ir.sample_rate());
  return analysis::ImpulseResponse(dsp::convolve(ir.buffer(), fir), ir.direct_index() + fir.delay_samples);
}

}  // namespace roomrelight::synth
