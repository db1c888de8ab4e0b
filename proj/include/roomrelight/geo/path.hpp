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
#include <vector>

namespace roomrelight::geo {

inline constexpr double kSpeedOfSound = 343.0;  // m/s

/// One propagation path from source to listener. Purely geometric: band
/// energies are derived later from the materials and the air model.
struct PathRecord {
  double arrival_time = 0.0;  ///< distance / kSpeedOfSound, seconds
  double distance = 0.0;      ///< meters
  std::vector<std::uint16_t> bounce_counts;  ///< hits per material index
  int order = 0;              ///< total reflections, 0 for the direct path
  /// Statistical weight folded into the energy (1 for deterministic paths).
  double weight = 1.0;
};

/// Sort key used everywhere paths are merged: time, then order, then distance.
inline bool path_less(const PathRecord& a, const PathRecord& b) {
  if (a.arrival_time != b.arrival_time) return a.arrival_time < b.arrival_time;
  if (a.order != b.order) return a.order < b.order;
  return a.distance < b.distance;
}

}  // namespace roomrelight::geo
