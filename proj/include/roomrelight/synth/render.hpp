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

#include <vector>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/dsp/audio.hpp"

namespace roomrelight::synth {

struct RenderResult {
  dsp::AudioBuffer audio;
  /// Factor applied to bring the peak down to 1; exactly 1 when untouched.
  double normalization = 1.0;
};

/// wet_gain * (dry * ir) + dry_gain * dry, peak-normalized only when the
/// mix would clip. The default is fully wet.
///
/// Throws std::invalid_argument on a sample-rate mismatch.
RenderResult render(const dsp::AudioBuffer& dry, const analysis::ImpulseResponse& ir, double wet_gain = 1.0,
                    double dry_gain = 0.0);

struct EnvelopePoint {
  double time_s = 0.0;
  double level_db = 0.0;  ///< relative to the loudest frame
};

/// Short-time energy of the IR in dB, one point per `frame_s`.
std::vector<EnvelopePoint> db_envelope(const analysis::ImpulseResponse& ir, double frame_s = 0.005);

}  // namespace roomrelight::synth
