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

#pragma once

#include <cstddef>
#include <vector>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/dsp/bands.hpp"
#include "roomrelight/dsp/fir.hpp"

namespace roomrelight::synth {

inline constexpr double kEqDelayMs = 32.0;
inline constexpr double kHighBandFloorDb = -50.0;
/// Lowest frequency held at the high-band floor: a semitone below the 8 kHz
/// octave's lower edge, so the transition band of the FIR sits under it.
inline constexpr double kHighBandFloorStartHz = 5340.0;

/// Correction filter applied to a synthesized response: per-octave gains on
/// the EQ bands relative to 1 kHz (held at 0 dB) and a fixed floor from the
/// 8 kHz octave up.
struct EqFilterSpec {
  std::vector<double> gains_db = std::vector<double>(dsp::kNumEqBands, 0.0);
  double delay_ms = kEqDelayMs;
  double highband_floor_db = kHighBandFloorDb;

  /// Gains that move `simulated` onto `target`; invalid bands of either get 0 dB.
  static EqFilterSpec from_delta(const dsp::BandProfile& target, const dsp::BandProfile& simulated);

  /// Odd FIR length whose group delay is delay_ms at `sample_rate`:
  /// 2 * round(delay_ms * fs / 1000) + 1.
  [[nodiscard]] std::size_t taps(int sample_rate) const;
  /// Throws std::invalid_argument on a wrong gain count, non-finite values
  /// or a non-positive delay.
  void validate() const;
};

/// Linear-phase FIR realizing `spec` at `sample_rate`.
dsp::FirFilter design_eq_filter(const EqFilterSpec& spec, int sample_rate);

/// Convolves `ir` with the EQ filter. The output is delay_ms longer and its
/// direct index moves by the same amount.
analysis::ImpulseResponse apply_eq(const analysis::ImpulseResponse& ir, const EqFilterSpec& spec);

}  // namespace roomrelight::synth
