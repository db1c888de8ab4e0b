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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/geo/energy.hpp"
#include "roomrelight/geo/path.hpp"
#include "roomrelight/geo/room.hpp"

namespace roomrelight::synth {

/// Octave centers rendered into the response: a 62.5 Hz band followed by
/// the seven T60 bands.
inline constexpr std::array<double, 8> kRenderBandsHz{62.5, 125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0};

inline constexpr int kMinSynthesisRate = 8000;

struct SynthesisOptions {
  int sample_rate = 16000;
  std::uint64_t seed = 0;
  /// Silence appended after the last arrival for the band filters to ring out.
  double tail_s = 0.05;
};

/// Renders path records into an impulse response.
///
/// Each rendering band gets its own pulse train: a pulse of amplitude
/// sqrt(e) at round(t * fs) per path, with a random sign drawn from a
/// generator seeded by (seed, band), direct paths always positive. Each
/// train is band-pass filtered into its octave with the zero-phase
/// filterbank and the bands are summed. The 62.5 Hz band uses the 125 Hz
/// reflectivities and air attenuation. Bands whose lower edge lies at or
/// above Nyquist are left out.
///
/// `rho` is materials x 8 (rendering bands) or materials x 7 (T60 bands, the
/// 62.5 Hz column is copied from 125 Hz). The direct index of the result is
/// the earliest arrival.
///
/// Throws std::invalid_argument on empty paths, a sample rate below 8 kHz
/// or a reflectivity matrix of the wrong shape.
analysis::ImpulseResponse synthesize_ir(std::span<const geo::PathRecord> paths, const Eigen::MatrixXd& rho,
                                        const geo::AirModel& air, const SynthesisOptions& options = {});

/// Same, with the reflectivities taken from `materials`.
analysis::ImpulseResponse synthesize_ir(std::span<const geo::PathRecord> paths,
                                        std::span<const geo::MaterialCoeffs> materials, const geo::AirModel& air,
                                        const SynthesisOptions& options = {});

/// Materials x 7 matrix of the reflectivities in `materials`.
Eigen::MatrixXd reflectivity_matrix(std::span<const geo::MaterialCoeffs> materials);

}  // namespace roomrelight::synth
