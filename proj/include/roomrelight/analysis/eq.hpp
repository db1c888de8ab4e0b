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

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::analysis {

/// Octave-band EQ of an IR: mean DFT power over each octave in dB, relative
/// to the 1 kHz octave (which is measured even when `bands` lacks it).
/// Bands with no energy are returned invalid.
///
/// Throws std::invalid_argument if the 1 kHz octave carries no energy.
dsp::BandProfile extract_eq(const ImpulseResponse& ir, const dsp::BandSet& bands = dsp::BandSet::eq());

}  // namespace roomrelight::analysis
