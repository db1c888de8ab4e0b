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

#include <vector>

#include "roomrelight/geo/path.hpp"
#include "roomrelight/geo/room.hpp"

namespace roomrelight::geo {

inline constexpr int kMaxImageOrder = 60;

/// Exhaustive specular image sources of a shoebox room up to `max_order`
/// reflections, one record per image, sorted with path_less.
///
/// Throws std::invalid_argument if the room is not a shoebox, max_order is
/// outside [0, 60] or a point is not strictly inside the box.
std::vector<PathRecord> trace_image_source(const RoomModel& room, const Vec3& source, const Vec3& listener,
                                           int max_order);

}  // namespace roomrelight::geo
