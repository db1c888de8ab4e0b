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
#include <optional>
#include <vector>

#include "roomrelight/dsp/audio.hpp"
#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::dsp {

/// Linear-phase FIR filter. Designs from this module are odd-length and
/// symmetric, so delay_samples == (taps.size() - 1) / 2.
struct FirFilter {
  std::vector<double> taps;
  std::size_t delay_samples = 0;
  int sample_rate = 0;

  [[nodiscard]] AudioBuffer as_buffer() const { return AudioBuffer(taps, sample_rate); }
};

struct FirDesignOptions {
  std::size_t taps = 1023;
  int sample_rate = 16000;
  /// Gain applied from `shelf_start_hz` up to Nyquist instead of extending
  /// the top band's gain.
  std::optional<double> shelf_db;
  double shelf_start_hz = 0.0;
  /// Passes of octave-level correction after the initial design.
  int refine_iterations = 12;
  double refine_tolerance_db = 0.01;
};

/// Window-method design of a linear-phase FIR from per-octave gains (dB).
///
/// The target magnitude interpolates the gains linearly in dB over
/// log-frequency, holding the end values constant outside the outermost
/// centers. For the EQ band set an implicit 0 dB node sits at 1 kHz. The
/// zero-phase target is inverse transformed on a fine grid, truncated to
/// `taps`, Hann windowed and symmetrized. The node gains are then corrected
/// iteratively so that each octave's mean power level (as measured by
/// octave_band_levels_db) equals its requested gain.
///
/// Throws std::invalid_argument on even tap counts, non-finite gains or a
/// band above Nyquist.
FirFilter design_fir_gains(const BandProfile& gains_db, const FirDesignOptions& options = {});

inline FirFilter design_fir_gains(const BandProfile& gains_db, std::size_t taps, int sample_rate) {
  FirDesignOptions options;
  options.taps = taps;
  options.sample_rate = sample_rate;
  return design_fir_gains(gains_db, options);
}

}  // namespace roomrelight::dsp
