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
#include <cstdint>
#include <vector>

#include "roomrelight/geo/path.hpp"
#include "roomrelight/geo/room.hpp"

namespace roomrelight::geo {

struct StochasticOptions {
  std::size_t n_rays = 20000;
  int max_order = 1000;
  double max_time = 2.0;  ///< seconds of propagation per ray
  double detector_radius = 0.5;
  std::uint64_t seed = 0;
};

struct StochasticTrace {
  std::vector<PathRecord> paths;
  std::size_t escaped_rays = 0;
};

/// Monte Carlo specular ray tracing with a spherical listener detector.
///
/// Rays leave the source uniformly over the sphere. Every pass of a ray
/// through the detector after at least one reflection becomes a record with
/// weight 4 d^2 / (N r^2), so its evaluated energy is the ray's share
/// 1/N of the source power spread over the detector cross-section. The
/// direct path is added deterministically when it is unobstructed. Output
/// is sorted with path_less and independent of thread scheduling.
///
/// Throws std::invalid_argument if a point lies outside the room and
/// std::runtime_error if more than 1% of rays escape through gaps.
StochasticTrace trace_stochastic(const RoomModel& room, const Vec3& source, const Vec3& listener,
                                 const StochasticOptions& options);

/// Whether the open segment a-b crosses no wall.
bool line_of_sight(const RoomModel& room, const Vec3& a, const Vec3& b);

}  // namespace roomrelight::geo
