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

#include <cstdint>
#include <optional>
#include <vector>

#include "roomrelight/analysis/impulse_response.hpp"

namespace roomrelight::augment {

/// Parameters of a noise-driven exponentially decaying IR.
struct SyntheticIrSpec {
  std::vector<double> t60_s;        ///< one per T60 band
  std::vector<double> band_gain_db; ///< one per T60 band; empty means flat
  double duration_s = 2.0;
  double predelay_s = 0.01;
  std::optional<double> drr_db = 0.0;  ///< unset leaves the direct spike at 3x the tail peak
  int sample_rate = 16000;
  std::uint64_t seed = 0;
};

/// Gaussian noise split into T60 octave bands, each band weighted by its
/// gain and by exp(-3 ln10 t / T60_b), summed, plus a direct spike at the
/// predelay. The direct index is the spike position.
analysis::ImpulseResponse make_exponential_ir(const SyntheticIrSpec& spec);

/// Convenience overload with the same T60 in every band.
analysis::ImpulseResponse make_exponential_ir(double t60_s, double duration_s, int sample_rate, std::uint64_t seed);

}  // namespace roomrelight::augment
