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

#include "roomrelight/geo/image_source.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include <fmt/format.h>

namespace roomrelight::geo {
namespace {

// Along one axis, image index u corresponds to the mirrored coordinate
// (1 - 2p) s + 2 n L with u = 2n - p, p in {0, 1}. It reflects |n - p| times
// off the wall at 0 and |n| times off the wall at L.
struct AxisImage {
  double coord;
  int hits_low;
  int hits_high;
};

AxisImage axis_image(int u, double s, double length) {
  const int p = u & 1;
  const int n = (u + p) / 2;
  return {(1 - 2 * p) * s + 2.0 * n * length, std::abs(n - p), std::abs(n)};
}

bool strictly_inside(const Vec3& p, const Vec3& dims) {
  return p.x() > 0.0 && p.y() > 0.0 && p.z() > 0.0 && p.x() < dims.x() && p.y() < dims.y() && p.z() < dims.z();
}

}  // namespace

std::vector<PathRecord> trace_image_source(const RoomModel& room, const Vec3& source, const Vec3& listener,
                                           int max_order) {
  if (!room.is_shoebox()) throw std::invalid_argument("trace_image_source: room is not a shoebox");
  if (max_order < 0 || max_order > kMaxImageOrder) {
    throw std::invalid_argument(fmt::format("trace_image_source: max_order must be in [0, {}]", kMaxImageOrder));
  }
  const Vec3& dims = *room.dims();
  if (!strictly_inside(source, dims)) throw std::invalid_argument("trace_image_source: source is outside the room");
  if (!strictly_inside(listener, dims)) throw std::invalid_argument("trace_image_source: listener is outside the room");

  const std::size_t n_mat = room.num_materials();
  std::vector<PathRecord> paths;
  for (int u = -max_order; u <= max_order; ++u) {
    const AxisImage ix = axis_image(u, source.x(), dims.x());
    const int rest_u = max_order - std::abs(u);
    for (int v = -rest_u; v <= rest_u; ++v) {
      const AxisImage iy = axis_image(v, source.y(), dims.y());
      const int rest_v = rest_u - std::abs(v);
      for (int w = -rest_v; w <= rest_v; ++w) {
        const AxisImage iz = axis_image(w, source.z(), dims.z());
        PathRecord rec;
        rec.distance = (Vec3(ix.coord, iy.coord, iz.coord) - listener).norm();
        rec.arrival_time = rec.distance / kSpeedOfSound;
        rec.order = std::abs(u) + std::abs(v) + std::abs(w);
        rec.bounce_counts.assign(n_mat, 0);
        const int hits[6] = {ix.hits_low, ix.hits_high, iy.hits_low, iy.hits_high, iz.hits_low, iz.hits_high};
        for (std::size_t wall = 0; wall < 6; ++wall) {
          rec.bounce_counts[room.material_of(wall)] += static_cast<std::uint16_t>(hits[wall]);
        }
        paths.push_back(std::move(rec));
      }
    }
  }
  std::sort(paths.begin(), paths.end(), path_less);
  return paths;
}

}  // namespace roomrelight::geo
