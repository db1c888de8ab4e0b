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

#include "roomrelight/geo/room_io.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace roomrelight::geo {
namespace {

using nlohmann::json;

Vec3 parse_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument(fmt::format("scene: '{}' must be [x, y, z]", what));
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json point_json(const Vec3& p) { return json::array({p.x(), p.y(), p.z()}); }

BandValues parse_bands(const json& j, const std::string& name, const char* key) {
  if (!j.is_array() || j.size() != dsp::kNumT60Bands) {
    throw std::invalid_argument(
        fmt::format("scene: material '{}' needs {} values in '{}'", name, dsp::kNumT60Bands, key));
  }
  BandValues v{};
  for (std::size_t b = 0; b < v.size(); ++b) v[b] = j[b].get<double>();
  return v;
}

}  // namespace

Scene scene_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scene: top level must be an object");
  if (!j.contains("materials") || !j["materials"].is_object() || j["materials"].empty()) {
    throw std::invalid_argument("scene: 'materials' object is required");
  }
  std::vector<MaterialCoeffs> materials;
  std::map<std::string, std::size_t> index;
  for (const auto& [name, spec] : j["materials"].items()) {
    MaterialCoeffs m;
    m.name = name;
    if (spec.contains("reflectivity")) {
      m.reflectivity = parse_bands(spec["reflectivity"], name, "reflectivity");
    } else if (spec.contains("absorption")) {
      const BandValues a = parse_bands(spec["absorption"], name, "absorption");
      for (std::size_t b = 0; b < a.size(); ++b) m.reflectivity[b] = 1.0 - a[b];
    } else {
      throw std::invalid_argument(fmt::format("scene: material '{}' needs 'reflectivity' or 'absorption'", name));
    }
    index[name] = materials.size();
    materials.push_back(std::move(m));
  }
  const auto material_index = [&](const json& name) {
    const auto it = index.find(name.get<std::string>());
    if (it == index.end()) {
      throw std::invalid_argument(fmt::format("scene: unknown material '{}'", name.get<std::string>()));
    }
    return it->second;
  };

  std::optional<RoomModel> room;
  if (j.contains("shoebox")) {
    const json& sb = j["shoebox"];
    const Vec3 dims = parse_point(sb.at("dims"), "shoebox.dims");
    std::array<std::size_t, 6> walls{};
    if (sb.contains("walls")) {
      if (!sb["walls"].is_array() || sb["walls"].size() != 6) {
        throw std::invalid_argument("scene: 'shoebox.walls' must list 6 material names (x0, x1, y0, y1, z0, z1)");
      }
      for (std::size_t w = 0; w < 6; ++w) walls[w] = material_index(sb["walls"][w]);
    } else if (sb.contains("material")) {
      walls.fill(material_index(sb["material"]));
    } else if (materials.size() == 1) {
      walls.fill(0);
    } else {
      throw std::invalid_argument("scene: shoebox needs 'walls' or 'material'");
    }
    room = RoomModel::shoebox(dims, walls, materials);
  } else if (j.contains("planes")) {
    std::vector<std::vector<Vec3>> faces;
    std::vector<std::size_t> mats;
    for (const json& p : j["planes"]) {
      std::vector<Vec3> verts;
      for (const json& v : p.at("vertices")) verts.push_back(parse_point(v, "vertices"));
      faces.push_back(std::move(verts));
      mats.push_back(material_index(p.at("material")));
    }
    room = RoomModel(std::move(faces), std::move(mats), materials);
  } else {
    throw std::invalid_argument("scene: either 'planes' or 'shoebox' is required");
  }
  if (!j.contains("source") || !j.contains("listener")) {
    throw std::invalid_argument("scene: 'source' and 'listener' are required");
  }
  return Scene{std::move(*room), parse_point(j["source"], "source"), parse_point(j["listener"], "listener")};
}

json scene_to_json(const Scene& scene) {
  const RoomModel& room = scene.room;
  json j;
  json mats = json::object();
  for (const MaterialCoeffs& m : room.materials()) {
    json refl = json::array(), absn = json::array();
    for (double r : m.reflectivity) {
      refl.push_back(r);
      absn.push_back(1.0 - r);
    }
    mats[m.name] = {{"reflectivity", refl}, {"absorption", absn}};
  }
  j["materials"] = mats;
  if (room.is_shoebox()) {
    json walls = json::array();
    for (std::size_t w = 0; w < 6; ++w) walls.push_back(room.materials()[room.material_of(w)].name);
    j["shoebox"] = {{"dims", point_json(*room.dims())}, {"walls", walls}};
  } else {
    json planes = json::array();
    for (std::size_t p = 0; p < room.planes().size(); ++p) {
      json verts = json::array();
      for (const Vec3& v : room.planes()[p].vertices) verts.push_back(point_json(v));
      planes.push_back({{"vertices", verts}, {"material", room.materials()[room.material_of(p)].name}});
    }
    j["planes"] = planes;
  }
  j["source"] = point_json(scene.source);
  j["listener"] = point_json(scene.listener);
  return j;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open room file '{}'", path.string()));
  try {
    return scene_from_json(json::parse(in));
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("invalid room file '{}': {}", path.string(), e.what()));
  }
}

void save_scene(const std::filesystem::path& path, const Scene& scene) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write room file '{}'", path.string()));
  out << scene_to_json(scene).dump(2) << '\n';
}

}  // namespace roomrelight::geo
