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

#include "roomrelight/analysis/impulse_response.hpp"

namespace roomrelight::analysis {

inline constexpr double kDirectHalfWindowSeconds = 0.0025;

/// Half-width in samples of the direct-sound window at `sample_rate`.
std::size_t direct_half_window(int sample_rate);

struct DrrResult {
  double db = 0.0;        ///< +inf when anechoic
  bool anechoic = false;  ///< no energy outside the direct window
};

/// Direct-to-reverberant ratio: energy within +/-2.5 ms of the direct index
/// over all remaining energy, in dB.
DrrResult compute_drr(const ImpulseResponse& ir);

}  // namespace roomrelight::analysis
