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

#include "roomrelight/dsp/spectrum.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "roomrelight/dsp/bands.hpp"
#include "roomrelight/dsp/fft.hpp"

namespace roomrelight::dsp {

std::size_t band_level_fft_size(std::size_t length, int sample_rate) {
  return std::max(next_pow2(length), next_pow2(static_cast<std::size_t>(sample_rate)));
}

std::vector<double> octave_band_levels_db(std::span<const double> x, int sample_rate,
                                          std::span<const double> centers) {
  if (x.empty()) throw std::invalid_argument("octave_band_levels_db: empty signal");
  if (sample_rate <= 0) throw std::invalid_argument("octave_band_levels_db: sample rate must be positive");
  const std::size_t nfft = band_level_fft_size(x.size(), sample_rate);
  const RealFft fft(nfft);
  const auto spec = fft.forward(x);
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(nfft);
  const double nyquist = sample_rate / 2.0;

  std::vector<double> levels;
  levels.reserve(centers.size());
  for (double c : centers) {
    const double lo = octave_lower_edge(c);
    const double hi = std::min(octave_upper_edge(c), nyquist);
    const auto k0 = static_cast<std::size_t>(std::ceil(lo / bin_hz));
    const auto k1 = std::min(static_cast<std::size_t>(std::floor(hi / bin_hz)), spec.size() - 1);
    if (lo >= nyquist || k1 < k0) {
      throw std::invalid_argument(
          fmt::format("octave_band_levels_db: band centered at {} Hz has no spectral bins", c));
    }
    double sum = 0.0;
    for (std::size_t k = k0; k <= k1; ++k) sum += std::norm(spec[k]);
    const double mean = sum / static_cast<double>(k1 - k0 + 1);
    levels.push_back(mean > 0.0 ? power_to_db(mean) : -std::numeric_limits<double>::infinity());
  }
  return levels;
}

}  // namespace roomrelight::dsp
