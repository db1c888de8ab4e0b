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

#include <filesystem>

#include <json.hpp>

#include "roomrelight/geo/room.hpp"

namespace roomrelight::geo {

/// Parses a scene from JSON. Two room forms are accepted:
///
///   {"planes": [{"vertices": [[x,y,z], ...], "material": "name"}, ...], ...}
///   {"shoebox": {"dims": [Lx,Ly,Lz], "walls": [6 names] | "material": "name"}, ...}
///
/// alongside "materials": {name: {"reflectivity": [7]} | {"absorption": [7]}},
/// "source": [x,y,z] and "listener": [x,y,z]. Materials are indexed in
/// name order. Throws std::invalid_argument describing the first problem.
Scene scene_from_json(const nlohmann::json& j);

/// Inverse of scene_from_json. Shoebox rooms keep the shorthand form.
/// Materials carry both reflectivity and absorption.
nlohmann::json scene_to_json(const Scene& scene);

/// Throws std::runtime_error naming the path when it cannot be read or parsed.
Scene load_scene(const std::filesystem::path& path);
void save_scene(const std::filesystem::path& path, const Scene& scene);

}  // namespace roomrelight::geo
