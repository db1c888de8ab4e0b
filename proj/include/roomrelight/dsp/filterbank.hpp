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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "roomrelight/dsp/audio.hpp"
#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::dsp {

/// Second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Bank of octave-wide Butterworth band-pass filters applied zero-phase
/// (forward then backward), so each band's effective magnitude response is
/// |H(f)|^2 and its phase is identically zero.
///
/// Band b passes [center/sqrt(2), center*sqrt(2)]. When the top band's upper
/// edge reaches Nyquist it degenerates to a high-pass at its lower edge.
class OctaveFilterbank {
 public:
  static constexpr int kDefaultOrder = 4;

  OctaveFilterbank(std::span<const double> centers, int sample_rate, int order = kDefaultOrder);
  OctaveFilterbank(const BandSet& bands, int sample_rate, int order = kDefaultOrder)
      : OctaveFilterbank(bands.centers(), sample_rate, order) {}

  [[nodiscard]] std::size_t size() const { return bands_.size(); }
  [[nodiscard]] double center(std::size_t b) const { return bands_[b].center; }
  [[nodiscard]] int sample_rate() const { return sample_rate_; }
  [[nodiscard]] bool is_highpass(std::size_t b) const { return bands_[b].highpass; }
  [[nodiscard]] std::span<const Biquad> sections(std::size_t b) const { return bands_[b].sections; }

  [[nodiscard]] std::vector<AudioBuffer> apply(const AudioBuffer& x) const;
  [[nodiscard]] AudioBuffer apply_band(const AudioBuffer& x, std::size_t b) const;

  /// One-directional complex response of band b at `freq_hz`.
  [[nodiscard]] std::complex<double> response(std::size_t b, double freq_hz) const;

 private:
  struct Band {
    double center = 0.0;
    bool highpass = false;
    std::vector<Biquad> sections;
    std::size_t pad = 0;
  };

  int sample_rate_;
  std::vector<Band> bands_;
};

/// Splits x into one zero-phase octave band per center of `bands`.
std::vector<AudioBuffer> octave_filterbank(const AudioBuffer& x, const BandSet& bands);

/// Runs a cascade of biquads over `data` in place (direct form II transposed).
void filter_sections(std::span<const Biquad> sections, std::span<double> data);

}  // namespace roomrelight::dsp
