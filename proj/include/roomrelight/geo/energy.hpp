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
#include <vector>

#include "roomrelight/geo/path.hpp"
#include "roomrelight/geo/room.hpp"

namespace roomrelight::geo {

/// Energy attenuation of air per T60 band, nepers per meter.
struct AirModel {
  BandValues gamma{};

  /// Default table {0.0002, 0.0003, 0.0005, 0.001, 0.002, 0.006, 0.02}.
  static AirModel standard();
  static AirModel none() { return {}; }

  /// Throws std::invalid_argument on negative or decreasing coefficients.
  void validate() const;
};

/// Reflectivity of every material in one band.
std::vector<double> band_reflectivity(std::span<const MaterialCoeffs> materials, std::size_t band);

/// Energy fraction delivered along `path` in `band`:
/// weight * exp(-gamma d) / (4 pi d^2) * prod_m rho_m^n_m.
double path_energy(const PathRecord& path, std::span<const MaterialCoeffs> materials, const AirModel& air,
                   std::size_t band);

/// Same with the band's reflectivities given directly.
double path_energy(const PathRecord& path, std::span<const double> rho, double gamma);

/// 0.161 V / sum_i S_i (1 - rho_i); +inf when nothing absorbs.
double sabine_t60(const RoomModel& room, std::size_t band);

}  // namespace roomrelight::geo
