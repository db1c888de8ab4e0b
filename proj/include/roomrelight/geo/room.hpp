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
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::geo {

using Vec3 = Eigen::Vector3d;
using BandValues = std::array<double, dsp::kNumT60Bands>;

/// Per-band energy retention of one surface material (absorption = 1 - rho).
struct MaterialCoeffs {
  std::string name;
  BandValues reflectivity{};

  /// Throws std::invalid_argument unless 0 < rho <= 1 in every band.
  void validate() const;
};

/// Planar convex polygon with its inward unit normal. Points x on the plane
/// satisfy normal.dot(x) == offset.
struct Polygon {
  std::vector<Vec3> vertices;
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;
  double area = 0.0;
};

/// Closed room made of planar polygons, each assigned a material.
class RoomModel {
 public:
  /// Polygon normals are oriented inward from the vertex winding (which must
  /// be consistent across faces).
  ///
  /// Throws std::invalid_argument on degenerate faces, bad material indices
  /// or invalid materials.
  RoomModel(std::vector<std::vector<Vec3>> faces, std::vector<std::size_t> material_of_plane,
            std::vector<MaterialCoeffs> materials);

  /// Axis-aligned box [0, dims]. Walls are ordered x0, x1, y0, y1, z0, z1.
  static RoomModel shoebox(const Vec3& dims, const std::array<std::size_t, 6>& wall_materials,
                           std::vector<MaterialCoeffs> materials);

  [[nodiscard]] const std::vector<Polygon>& planes() const { return planes_; }
  [[nodiscard]] std::size_t material_of(std::size_t plane) const { return material_of_plane_[plane]; }
  [[nodiscard]] const std::vector<std::size_t>& material_of_plane() const { return material_of_plane_; }
  [[nodiscard]] const std::vector<MaterialCoeffs>& materials() const { return materials_; }
  [[nodiscard]] std::size_t num_materials() const { return materials_.size(); }

  /// Replaces one material's reflectivity (validated).
  void set_reflectivity(std::size_t material, const BandValues& rho);

  [[nodiscard]] double volume() const { return volume_; }
  [[nodiscard]] double surface_area() const { return surface_area_; }
  /// Total surface area covered by each material.
  [[nodiscard]] std::vector<double> material_areas() const;

  [[nodiscard]] bool is_shoebox() const { return dims_.has_value(); }
  /// Box dimensions; only set for rooms built by shoebox().
  [[nodiscard]] const std::optional<Vec3>& dims() const { return dims_; }

  /// Point-in-room test by ray-crossing parity.
  [[nodiscard]] bool contains(const Vec3& p) const;

 private:
  std::vector<Polygon> planes_;
  std::vector<std::size_t> material_of_plane_;
  std::vector<MaterialCoeffs> materials_;
  std::optional<Vec3> dims_;
  double volume_ = 0.0;
  double surface_area_ = 0.0;
};

/// Source and listener placed in a room.
struct Scene {
  RoomModel room;
  Vec3 source = Vec3::Zero();
  Vec3 listener = Vec3::Zero();
};

/// Whether `p`, assumed to lie on the polygon's plane, is inside it or on
/// its boundary (within a small tolerance).
bool polygon_contains(const Polygon& poly, const Vec3& p);

}  // namespace roomrelight::geo
