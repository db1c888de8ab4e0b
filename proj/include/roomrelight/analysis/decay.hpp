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
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::analysis {

/// Schroeder decay fit of one energy sequence.
struct DecayFit {
  std::vector<double> edc_db;  ///< normalized to 0 dB at the start, truncated at the noise floor
  double slope_db_per_s = 0.0;
  std::pair<double, double> fit_range_db{0.0, 0.0};  ///< (upper, lower)
  double t60 = 0.0;
  double dynamic_range_db = 0.0;  ///< envelope peak above the noise floor
  std::size_t start = 0;          ///< index of edc_db[0] in the input sequence
  bool noise_floor = false;       ///< the tail levels off rather than still decaying
  bool valid = false;

  /// First input index past the retained decay.
  [[nodiscard]] std::size_t end() const { return start + edc_db.size(); }
};

struct DecayFitOptions {
  double smoothing_s = 0.01;
  double tail_fraction = 0.1;
  double floor_margin_db = 6.0;
  std::size_t min_fit_points = 10;
};

/// Fits a decay line to `energy` (squared amplitude per sample, or energy
/// per histogram bin) sampled at `rate` Hz, starting at index `start`.
///
/// The noise floor is the mean of the last tail_fraction of the sequence.
/// It counts as a real floor when the second half of that tail is within
/// 3 dB of the first half. Either way the sequence is cut where its smoothed envelope first drops below
/// floor + floor_margin_db, the backward-integrated curve is normalized to
/// 0 dB and a least-squares line is fitted between -5 and -35 dB. If the
/// envelope spans less than 45 dB above the floor the lower bound moves to
/// -25 dB (35 dB needed) and then to -15 dB (25 dB needed); below that the
/// fit is marked invalid.
DecayFit fit_decay(std::span<const double> energy, double rate, std::size_t start,
                   const DecayFitOptions& options = {});

/// Raised when no band of an impulse response yields a usable decay. The
/// all-invalid profile is attached so callers can still report the mask.
class T60EstimationError : public std::runtime_error {
 public:
  T60EstimationError(const std::string& what, dsp::BandProfile profile)
      : std::runtime_error(what), profile_(std::move(profile)) {}
  [[nodiscard]] const dsp::BandProfile& profile() const { return profile_; }

 private:
  dsp::BandProfile profile_;
};

/// Minimum reverberation time, in octave-bandwidth periods, that a band
/// must show before its fit is trusted. Shorter decays are dominated by the
/// analysis filter's own ringing.
inline constexpr double kMinDecayBandwidthProduct = 8.0;

/// Per-band decay fits of `ir` after octave filtering.
std::vector<DecayFit> analyze_decay(const ImpulseResponse& ir, const dsp::BandSet& bands);

/// Per-band T60 in seconds with a validity mask (invalid entries hold 0).
///
/// Throws std::invalid_argument if the IR has less than 0.25 s after the
/// direct arrival and T60EstimationError if every band is invalid.
dsp::BandProfile estimate_t60(const ImpulseResponse& ir, const dsp::BandSet& bands);

/// Broadband decay fit of the unfiltered IR.
DecayFit fullband_decay(const ImpulseResponse& ir);

}  // namespace roomrelight::analysis
