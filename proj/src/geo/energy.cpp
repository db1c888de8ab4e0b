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

#include "roomrelight/geo/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace roomrelight::geo {

AirModel AirModel::standard() { return {{0.0002, 0.0003, 0.0005, 0.001, 0.002, 0.006, 0.02}}; }

void AirModel::validate() const {
  for (std::size_t b = 0; b < gamma.size(); ++b) {
    if (!(gamma[b] >= 0.0) || (b > 0 && gamma[b] < gamma[b - 1])) {
      throw std::invalid_argument("AirModel: attenuation must be non-negative and non-decreasing with frequency");
    }
  }
}

std::vector<double> band_reflectivity(std::span<const MaterialCoeffs> materials, std::size_t band) {
  std::vector<double> rho;
  rho.reserve(materials.size());
  for (const auto& m : materials) rho.push_back(m.reflectivity.at(band));
  return rho;
}

double path_energy(const PathRecord& path, std::span<const double> rho, double gamma) {
  double e = path.weight * std::exp(-gamma * path.distance) /
             (4.0 * std::numbers::pi * path.distance * path.distance);
  for (std::size_t m = 0; m < path.bounce_counts.size(); ++m) {
    if (path.bounce_counts[m] > 0) e *= std::pow(rho[m], path.bounce_counts[m]);
  }
  return e;
}

double path_energy(const PathRecord& path, std::span<const MaterialCoeffs> materials, const AirModel& air,
                   std::size_t band) {
  return path_energy(path, band_reflectivity(materials, band), air.gamma.at(band));
}

double sabine_t60(const RoomModel& room, std::size_t band) {
  double absorption = 0.0;
  for (std::size_t p = 0; p < room.planes().size(); ++p) {
    absorption += room.planes()[p].area * (1.0 - room.materials()[room.material_of(p)].reflectivity.at(band));
  }
  if (!(absorption > 0.0)) return std::numeric_limits<double>::infinity();
  return 0.161 * room.volume() / absorption;
}

}  // namespace roomrelight::geo
