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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace roomrelight::dsp {

inline double power_to_db(double p) { return 10.0 * std::log10(p); }
inline double amplitude_to_db(double a) { return 20.0 * std::log10(a); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

/// Transform size used for band-level measurements of a signal of `length`
/// samples: at least 1 Hz resolution and never shorter than the signal.
std::size_t band_level_fft_size(std::size_t length, int sample_rate);

/// Mean power-spectrum level, in dB, of x over each octave interval
/// [c/sqrt(2), c*sqrt(2)] (clipped at Nyquist). A band with zero energy
/// yields -inf.
///
/// Throws std::invalid_argument if x is empty or a band holds no DFT bin.
std::vector<double> octave_band_levels_db(std::span<const double> x, int sample_rate,
                                          std::span<const double> centers);

}  // namespace roomrelight::dsp
