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

#include "roomrelight/analysis/eq.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "roomrelight/dsp/spectrum.hpp"

namespace roomrelight::analysis {

dsp::BandProfile extract_eq(const ImpulseResponse& ir, const dsp::BandSet& bands) {
  std::vector<double> centers(bands.centers().begin(), bands.centers().end());
  centers.push_back(dsp::kReferenceBandHz);
  const std::vector<double> levels = dsp::octave_band_levels_db(ir.samples(), ir.sample_rate(), centers);
  const double reference = levels.back();
  if (!std::isfinite(reference)) throw std::invalid_argument("extract_eq: no energy in the 1 kHz reference octave");

  std::vector<double> gains(bands.size(), 0.0);
  std::vector<bool> valid(bands.size(), false);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    if (std::isfinite(levels[b])) {
      gains[b] = levels[b] - reference;
      valid[b] = true;
    }
  }
  return dsp::BandProfile(bands, std::move(gains), std::move(valid));
}

}  // namespace roomrelight::analysis
