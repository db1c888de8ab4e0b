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

#include "roomrelight/geo/room.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace roomrelight::geo {
namespace {

constexpr double kEdgeTolerance = 1e-9;

}  // namespace

void MaterialCoeffs::validate() const {
  for (std::size_t b = 0; b < reflectivity.size(); ++b) {
    const double r = reflectivity[b];
    if (!(r > 0.0 && r <= 1.0)) {
      throw std::invalid_argument(
          fmt::format("material '{}': reflectivity {} in band {} is outside (0, 1]", name, r, b));
    }
  }
}

bool polygon_contains(const Polygon& poly, const Vec3& p) {
  const std::size_t n = poly.vertices.size();
  bool any_pos = false, any_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = poly.vertices[i];
    const Vec3& b = poly.vertices[(i + 1) % n];
    const Vec3 edge = b - a;
    const double s = edge.cross(p - a).dot(poly.normal);
    const double tol = kEdgeTolerance * std::max(1.0, edge.squaredNorm());
    if (s > tol) any_pos = true;
    if (s < -tol) any_neg = true;
    if (any_pos && any_neg) return false;
  }
  return true;
}

RoomModel::RoomModel(std::vector<std::vector<Vec3>> faces, std::vector<std::size_t> material_of_plane,
                     std::vector<MaterialCoeffs> materials)
    : material_of_plane_(std::move(material_of_plane)), materials_(std::move(materials)) {
  if (faces.size() < 4) throw std::invalid_argument("RoomModel: a closed room needs at least 4 planes");
  if (faces.size() != material_of_plane_.size()) {
    throw std::invalid_argument("RoomModel: one material index per plane is required");
  }
  if (materials_.empty()) throw std::invalid_argument("RoomModel: no materials");
  for (const auto& m : materials_) m.validate();

  double signed_volume = 0.0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (material_of_plane_[f] >= materials_.size()) {
      throw std::invalid_argument(fmt::format("RoomModel: plane {} references missing material {}", f,
                                              material_of_plane_[f]));
    }
    const auto& v = faces[f];
    if (v.size() < 3) throw std::invalid_argument(fmt::format("RoomModel: plane {} has fewer than 3 vertices", f));
    // Newell's method: the vector area of the polygon.
    Vec3 vector_area = Vec3::Zero();
    for (std::size_t i = 0; i < v.size(); ++i) vector_area += v[i].cross(v[(i + 1) % v.size()]);
    vector_area *= 0.5;
    const double area = vector_area.norm();
    if (!(area > 1e-12)) throw std::invalid_argument(fmt::format("RoomModel: plane {} is degenerate", f));
    Polygon poly;
    poly.vertices = v;
    poly.normal = vector_area / area;
    poly.area = area;
    for (const Vec3& x : v) {
      if (std::abs(poly.normal.dot(x - v[0])) > 1e-6 * std::max(1.0, std::sqrt(area))) {
        throw std::invalid_argument(fmt::format("RoomModel: plane {} is not planar", f));
      }
    }
    signed_volume += poly.normal.dot(v[0]) * area / 3.0;
    planes_.push_back(std::move(poly));
  }
  // A positive signed volume means the winding gave outward normals.
  const double orientation = signed_volume > 0.0 ? -1.0 : 1.0;
  for (Polygon& p : planes_) {
    p.normal *= orientation;
    p.offset = p.normal.dot(p.vertices[0]);
    surface_area_ += p.area;
  }
  volume_ = std::abs(signed_volume);
  if (!(volume_ > 1e-9)) throw std::invalid_argument("RoomModel: enclosed volume is zero");
}

RoomModel RoomModel::shoebox(const Vec3& dims, const std::array<std::size_t, 6>& wall_materials,
                             std::vector<MaterialCoeffs> materials) {
  const double x = dims.x(), y = dims.y(), z = dims.z();
  if (!(x > 0.0 && y > 0.0 && z > 0.0)) throw std::invalid_argument("RoomModel::shoebox: dimensions must be positive");
  // Counter-clockwise seen from inside, so the winding gives inward normals.
  std::vector<std::vector<Vec3>> faces = {
      {{0, 0, 0}, {0, y, 0}, {0, y, z}, {0, 0, z}},  // x = 0
      {{x, 0, 0}, {x, 0, z}, {x, y, z}, {x, y, 0}},  // x = Lx
      {{0, 0, 0}, {0, 0, z}, {x, 0, z}, {x, 0, 0}},  // y = 0
      {{0, y, 0}, {x, y, 0}, {x, y, z}, {0, y, z}},  // y = Ly
      {{0, 0, 0}, {x, 0, 0}, {x, y, 0}, {0, y, 0}},  // z = 0
      {{0, 0, z}, {0, y, z}, {x, y, z}, {x, 0, z}},  // z = Lz
  };
  RoomModel room(std::move(faces), std::vector<std::size_t>(wall_materials.begin(), wall_materials.end()),
                 std::move(materials));
  room.dims_ = dims;
  return room;
}

void RoomModel::set_reflectivity(std::size_t material, const BandValues& rho) {
  MaterialCoeffs updated = materials_.at(material);
  updated.reflectivity = rho;
  updated.validate();
  materials_[material] = std::move(updated);
}

std::vector<double> RoomModel::material_areas() const {
  std::vector<double> areas(materials_.size(), 0.0);
  for (std::size_t p = 0; p < planes_.size(); ++p) areas[material_of_plane_[p]] += planes_[p].area;
  return areas;
}

bool RoomModel::contains(const Vec3& p) const {
  // An irrational-looking direction avoids grazing edges of axis-aligned rooms.
  const Vec3 dir = Vec3(0.5773, 0.6123, 0.5403).normalized();
  int crossings = 0;
  for (const Polygon& poly : planes_) {
    const double denom = poly.normal.dot(dir);
    if (std::abs(denom) < 1e-12) continue;
    const double t = (poly.offset - poly.normal.dot(p)) / denom;
    if (t <= 1e-12) continue;
    if (polygon_contains(poly, p + t * dir)) ++crossings;
  }
  return crossings % 2 == 1;
}

}  // namespace roomrelight::geo
