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

#include <Eigen/Core>

#include "roomrelight/dsp/audio.hpp"

namespace roomrelight::dsp {

/// Log-power Mel spectrogram. Rows are Mel bands (low to high), columns are
/// frames.
struct Spectrogram {
  Eigen::MatrixXd values;
  int mel_bands = 0;
  int hop = 0;
  int window = 0;
};

inline constexpr double kMelFloorDb = -100.0;

/// Hann-windowed STFT (no centering, frames fully inside the clip), power
/// spectrum through triangular HTK-scale Mel filters spanning 0 Hz to Nyquist
/// with each filter's weights summing to one, then 10*log10 floored at
/// kMelFloorDb. A 4 s clip at 16 kHz with the defaults gives 32 x 499.
///
/// Throws std::invalid_argument when the clip is shorter than one window.
Spectrogram log_mel_features(const AudioBuffer& x, int n_mel = 32, int window = 256,
                             double overlap = 0.5);

}  // namespace roomrelight::dsp
