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

#include <random>
#include <span>
#include <vector>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::augment {

using Rng = std::mt19937_64;

/// Independent normal model of per-band EQ gains (dB) over the EQ band set.
struct EqDistribution {
  std::vector<double> mean_db;
  std::vector<double> std_db;

  /// Throws std::invalid_argument on wrong lengths or negative spreads.
  void validate() const;
};

/// Per-band sample mean and sample standard deviation of extract_eq over a
/// corpus. IRs whose EQ cannot be measured (or that have an unmeasurable
/// band) are skipped with a warning.
///
/// Throws std::invalid_argument with fewer than two IRs and
/// std::runtime_error if fewer than two survive.
EqDistribution fit_eq_distribution(std::span<const analysis::ImpulseResponse> irs);

struct EqAugmentation {
  analysis::ImpulseResponse ir;
  dsp::BandProfile target_eq;
};

/// FIR length used for EQ compensation: 2*round(0.032*fs) - 1 (1023 at 16 kHz).
std::size_t eq_compensation_taps(int sample_rate);

/// Convolves `ir` with a linear-phase FIR whose band gains move the IR's
/// measured EQ to `target`. A few correction passes absorb the mismatch
/// between the FIR's band levels and the product with the IR spectrum.
/// The direct index shifts by the FIR delay.
analysis::ImpulseResponse equalize_to(const analysis::ImpulseResponse& ir, const dsp::BandProfile& target);

/// Draws a target EQ from Normal(mean, inflation*std) per band and
/// equalizes `ir` towards it.
EqAugmentation augment_eq(const analysis::ImpulseResponse& ir, const EqDistribution& model, double inflation,
                          Rng& rng);

/// Re-weights the tail after direct + 2.5 ms by exp((d_src - d_tgt) t), with
/// d = 3 ln 10 / T60 and t measured from the direct arrival, so the
/// broadband decay moves from its measured T60 to `target_t60`. Samples past
/// the source's noise-floor cut are zeroed when the decay is lengthened, so
/// the floor is not amplified.
///
/// Throws std::invalid_argument for a non-positive target and
/// std::runtime_error when the source T60 cannot be measured.
analysis::ImpulseResponse augment_t60(const analysis::ImpulseResponse& ir, double target_t60);

/// Scales the +/-2.5 ms direct segment so compute_drr returns target_drr_db.
///
/// Throws std::invalid_argument if the direct segment is silent and
/// std::runtime_error if there is no reverberant energy.
analysis::ImpulseResponse augment_drr(const analysis::ImpulseResponse& ir, double target_drr_db);

}  // namespace roomrelight::augment
