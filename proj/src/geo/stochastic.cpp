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

#include "roomrelight/geo/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <tbb/parallel_for.h>

namespace roomrelight::geo {
namespace {

constexpr double kHitEpsilon = 1e-9;
constexpr double kEscapeLimit = 0.01;

struct Hit {
  double t;
  std::size_t plane;
};

std::optional<Hit> nearest_hit(const RoomModel& room, const Vec3& origin, const Vec3& dir, std::size_t skip) {
  std::optional<Hit> best;
  const auto& planes = room.planes();
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (i == skip) continue;
    const Polygon& poly = planes[i];
    const double denom = poly.normal.dot(dir);
    if (denom >= 0.0) continue;  // moving away from this wall (normals point inward)
    const double t = (poly.offset - poly.normal.dot(origin)) / denom;
    if (t <= kHitEpsilon || (best && t >= best->t)) continue;
    if (polygon_contains(poly, origin + t * dir)) best = Hit{t, i};
  }
  return best;
}

Vec3 uniform_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 2.0 * unit(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

struct RayResult {
  std::vector<PathRecord> hits;
  bool escaped = false;
};

RayResult trace_ray(const RoomModel& room, const Vec3& source, const Vec3& listener, const StochasticOptions& opt,
                    std::size_t ray) {
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(ray), static_cast<std::uint32_t>(static_cast<std::uint64_t>(ray) >> 32)};
  std::mt19937_64 rng(seq);
  RayResult out;
  Vec3 pos = source;
  Vec3 dir = uniform_direction(rng);
  std::vector<std::uint16_t> counts(room.num_materials(), 0);
  const double r2 = opt.detector_radius * opt.detector_radius;
  const double max_distance = opt.max_time * kSpeedOfSound;
  double travelled = 0.0;
  std::size_t last_plane = std::numeric_limits<std::size_t>::max();
  for (int order = 0; order <= opt.max_order; ++order) {
    const auto hit = nearest_hit(room, pos, dir, last_plane);
    if (!hit) {
      out.escaped = true;
      return out;
    }
    const double seg = std::min(hit->t, max_distance - travelled);
    if (order > 0) {
      // Closest approach to the listener on this segment, counted once per
      // pass: a pass ending exactly at the wall belongs to this segment.
      const double along = std::clamp((listener - pos).dot(dir), 0.0, seg);
      if (along > 0.0 && (pos + along * dir - listener).squaredNorm() < r2) {
        PathRecord rec;
        rec.distance = travelled + along;
        rec.arrival_time = rec.distance / kSpeedOfSound;
        rec.order = order;
        rec.bounce_counts = counts;
        rec.weight = 4.0 * rec.distance * rec.distance / (static_cast<double>(opt.n_rays) * r2);
        out.hits.push_back(std::move(rec));
      }
    }
    travelled += seg;
    if (seg < hit->t) break;  // out of time
    const Polygon& wall = room.planes()[hit->plane];
    pos += hit->t * dir;
    dir -= 2.0 * dir.dot(wall.normal) * wall.normal;
    counts[room.material_of(hit->plane)]++;
    last_plane = hit->plane;
  }
  return out;
}

}  // namespace

bool line_of_sight(const RoomModel& room, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len = d.norm();
  if (len == 0.0) return true;
  const Vec3 dir = d / len;
  for (const Polygon& poly : room.planes()) {
    const double denom = poly.normal.dot(dir);
    if (std::abs(denom) < 1e-15) continue;
    const double t = (poly.offset - poly.normal.dot(a)) / denom;
    if (t > kHitEpsilon && t < len - kHitEpsilon && polygon_contains(poly, a + t * dir)) return false;
  }
  return true;
}

StochasticTrace trace_stochastic(const RoomModel& room, const Vec3& source, const Vec3& listener,
                                 const StochasticOptions& opt) {
  if (!room.contains(source)) throw std::invalid_argument("trace_stochastic: source is outside the room");
  if (!room.contains(listener)) throw std::invalid_argument("trace_stochastic: listener is outside the room");
  if (!(opt.detector_radius > 0.0)) throw std::invalid_argument("trace_stochastic: detector radius must be positive");
  if (opt.max_order < 0 || !(opt.max_time > 0.0)) throw std::invalid_argument("trace_stochastic: bad ray limits");

  std::vector<RayResult> rays(opt.n_rays);
  tbb::parallel_for(std::size_t{0}, opt.n_rays,
                    [&](std::size_t i) { rays[i] = trace_ray(room, source, listener, opt, i); });

  StochasticTrace trace;
  if (line_of_sight(room, source, listener)) {
    PathRecord direct;
    direct.distance = (listener - source).norm();
    direct.arrival_time = direct.distance / kSpeedOfSound;
    direct.bounce_counts.assign(room.num_materials(), 0);
    trace.paths.push_back(std::move(direct));
  }
  for (RayResult& r : rays) {
    if (r.escaped) {
      ++trace.escaped_rays;
      continue;
    }
    for (PathRecord& p : r.hits) trace.paths.push_back(std::move(p));
  }
  if (trace.escaped_rays > 0) {
    spdlog::warn("trace_stochastic: {} of {} rays escaped the geometry and were dropped", trace.escaped_rays,
                 opt.n_rays);
  }
  if (static_cast<double>(trace.escaped_rays) > kEscapeLimit * static_cast<double>(opt.n_rays)) {
    throw std::runtime_error(fmt::format("trace_stochastic: {} of {} rays escaped; the room is not watertight",
                                         trace.escaped_rays, opt.n_rays));
  }
  std::stable_sort(trace.paths.begin(), trace.paths.end(), path_less);
  return trace;
}

}  // namespace roomrelight::geo
