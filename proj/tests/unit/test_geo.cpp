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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>
#include <vector>

#include "roomrelight/geo/energy.hpp"
#include "roomrelight/geo/image_source.hpp"
#include "roomrelight/geo/room.hpp"
#include "roomrelight/geo/room_io.hpp"
#include "roomrelight/geo/stochastic.hpp"
#include "roomrelight/opt/material_opt.hpp"

using namespace roomrelight;
using geo::Vec3;

namespace {

std::vector<geo::MaterialCoeffs> uniform_materials(std::size_t n, double rho) {
  std::vector<geo::MaterialCoeffs> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i].name = "m" + std::to_string(i);
    m[i].reflectivity.fill(rho);
  }
  return m;
}

geo::RoomModel box(const Vec3& dims, double rho = 0.7) {
  return geo::RoomModel::shoebox(dims, {0, 0, 0, 0, 0, 0}, uniform_materials(1, rho));
}

// Every image reachable by mirroring the source across up to `order` walls
// of an axis-aligned box, with the wall hits that produced it.
std::map<std::tuple<long, long, long>, std::array<int, 6>> brute_force_images(const Vec3& dims, const Vec3& src,
                                                                              int order) {
  struct Image {
    Vec3 p;
    std::array<int, 6> hits;
    int last;
  };
  std::map<std::tuple<long, long, long>, std::array<int, 6>> out;
  const auto key = [](const Vec3& p) {
    return std::make_tuple(std::lround(p.x() * 1e6), std::lround(p.y() * 1e6), std::lround(p.z() * 1e6));
  };
  std::vector<Image> frontier{{src, {}, -1}};
  out[key(src)] = {};
  for (int k = 0; k < order; ++k) {
    std::vector<Image> next;
    for (const Image& im : frontier) {
      for (int w = 0; w < 6; ++w) {
        if (w == im.last) continue;
        Image m = im;
        const int axis = w / 2;
        m.p[axis] = (w % 2 == 0) ? -im.p[axis] : 2.0 * dims[axis] - im.p[axis];
        m.hits[static_cast<std::size_t>(w)]++;
        m.last = w;
        out.emplace(key(m.p), m.hits);
        next.push_back(m);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("room model validation") {
  CHECK_THROWS_AS(geo::RoomModel::shoebox({4, 6, 3}, {0, 0, 0, 0, 0, 1}, uniform_materials(1, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(geo::RoomModel::shoebox({4, 6, 3}, {0, 0, 0, 0, 0, 0}, uniform_materials(1, 1.2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(geo::RoomModel::shoebox({4, 6, 3}, {0, 0, 0, 0, 0, 0}, uniform_materials(1, 0.0)),
                  std::invalid_argument);
  const geo::RoomModel r = box({4, 6, 3});
  CHECK(r.planes().size() == 6);
  CHECK(r.volume() == doctest::Approx(72.0));
  CHECK(r.surface_area() == doctest::Approx(108.0));
  CHECK(r.contains({1, 1, 1}));
  CHECK_FALSE(r.contains({5, 1, 1}));
  for (const auto& p : r.planes()) {
    // Inward normals: the room center is on the positive side.
    CHECK(p.normal.dot(Vec3(2, 3, 1.5)) - p.offset > 0.0);
  }
}

TEST_CASE("scene JSON round trip") {
  std::vector<geo::MaterialCoeffs> mats = uniform_materials(2, 0.8);
  mats[1].reflectivity = {0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6};
  const geo::Scene s{geo::RoomModel::shoebox({5, 4, 3}, {0, 0, 1, 1, 0, 1}, mats), {1, 1, 1}, {3, 2, 1.5}};
  const geo::Scene back = geo::scene_from_json(geo::scene_to_json(s));
  CHECK(back.room.material_of_plane() == s.room.material_of_plane());
  CHECK(back.room.materials()[1].reflectivity == s.room.materials()[1].reflectivity);
  CHECK(back.source == s.source);
  CHECK(back.listener == s.listener);
  CHECK_THROWS(geo::scene_from_json(nlohmann::json::parse(R"({"materials": {}})")));
}

TEST_CASE("image-source tracer") {
  const Vec3 src{1.0, 1.5, 1.2}, lst{2.5, 4.0, 1.7};

  SUBCASE("order 0 is the direct path") {
    const auto p = geo::trace_image_source(box({4, 6, 3}), src, lst, 0);
    REQUIRE(p.size() == 1);
    CHECK(p[0].order == 0);
    CHECK(p[0].distance == doctest::Approx((src - lst).norm()));
    CHECK(p[0].arrival_time == doctest::Approx(p[0].distance / 343.0));
  }

  SUBCASE("order 1 adds the six first-order images") {
    CHECK(geo::trace_image_source(box({4, 6, 3}), src, lst, 1).size() == 7);
  }

  SUBCASE("order 2 in a cube matches brute-force mirroring") {
    const Vec3 dims{5, 5, 5};
    std::vector<geo::MaterialCoeffs> mats = uniform_materials(6, 0.7);
    const geo::RoomModel cube = geo::RoomModel::shoebox(dims, {0, 1, 2, 3, 4, 5}, mats);
    const Vec3 s{1.2, 3.1, 2.2}, l{3.7, 1.4, 4.1};
    const auto paths = geo::trace_image_source(cube, s, l, 2);
    const auto oracle = brute_force_images(dims, s, 2);
    REQUIRE(paths.size() == oracle.size());
    std::vector<std::pair<double, std::array<int, 6>>> want, got;
    for (const auto& [k, hits] : oracle) {
      const Vec3 p(std::get<0>(k) * 1e-6, std::get<1>(k) * 1e-6, std::get<2>(k) * 1e-6);
      want.emplace_back(std::round((p - l).norm() * 1e4), hits);
    }
    for (const auto& p : paths) {
      int sum = 0;
      std::array<int, 6> hits{};
      for (std::size_t m = 0; m < 6; ++m) {
        hits[m] = p.bounce_counts[m];
        sum += p.bounce_counts[m];
      }
      CHECK(sum == p.order);
      got.emplace_back(std::round(p.distance * 1e4), hits);
    }
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    CHECK(want == got);
  }

  SUBCASE("order beyond the cap is rejected") {
    CHECK_THROWS_AS(geo::trace_image_source(box({4, 6, 3}), src, lst, geo::kMaxImageOrder + 1), std::invalid_argument);
  }
}

TEST_CASE("stochastic tracer") {
  const geo::RoomModel room = box({4, 6, 3}, 0.5);
  const Vec3 src{1.2, 1.5, 1.4}, lst{2.7, 4.1, 1.6};

  SUBCASE("no rays leaves the direct path") {
    geo::StochasticOptions o;
    o.n_rays = 0;
    const auto t = geo::trace_stochastic(room, src, lst, o);
    REQUIRE(t.paths.size() == 1);
    CHECK(t.paths[0].order == 0);
  }

  SUBCASE("deterministic for a seed") {
    geo::StochasticOptions o;
    o.n_rays = 2000;
    o.seed = 9;
    const auto a = geo::trace_stochastic(room, src, lst, o).paths;
    const auto b = geo::trace_stochastic(room, src, lst, o).paths;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].arrival_time == b[i].arrival_time);
      CHECK(a[i].bounce_counts == b[i].bounce_counts);
      CHECK(a[i].weight == b[i].weight);
    }
  }

  SUBCASE("energy decay agrees with the image-source tracer") {
    geo::StochasticOptions o;
    o.n_rays = 20000;
    o.max_time = 1.0;
    o.seed = 4;
    const auto stochastic = geo::trace_stochastic(room, src, lst, o).paths;
    const auto images = geo::trace_image_source(room, src, lst, 30);
    const std::vector<double> rho{0.5};
    const auto a = opt::envelope_decay(stochastic, rho, 0.0);
    const auto b = opt::envelope_decay(images, rho, 0.0);
    REQUIRE(a.valid);
    REQUIRE(b.valid);
    CHECK(a.slope_db_per_s == doctest::Approx(b.slope_db_per_s).epsilon(0.15));
  }
}

TEST_CASE("path energy") {
  geo::PathRecord direct;
  direct.distance = 1.0;
  direct.arrival_time = 1.0 / 343.0;
  direct.bounce_counts = {0};
  const std::vector<double> half{0.5};
  CHECK(geo::path_energy(direct, half, 0.0) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));

  geo::PathRecord one = direct;
  one.bounce_counts = {1};
  one.order = 1;
  CHECK(geo::path_energy(one, half, 0.0) == doctest::Approx(0.5 / (4.0 * std::numbers::pi)));

  geo::PathRecord three = direct;
  three.bounce_counts = {1, 2};
  three.order = 3;
  const std::vector<double> rho{0.3, 0.4}, rho2{0.6, 0.8};
  CHECK(geo::path_energy(three, rho2, 0.0) == doctest::Approx(8.0 * geo::path_energy(three, rho, 0.0)));

  geo::PathRecord far = direct;
  far.distance = 10.0;
  CHECK(geo::path_energy(far, half, 0.01) ==
        doctest::Approx(std::exp(-0.1) / (4.0 * std::numbers::pi * 100.0)));
}

TEST_CASE("Sabine reverberation time") {
  CHECK(geo::sabine_t60(box({4, 6, 3}, 0.7), 3) == doctest::Approx(0.161 * 72.0 / (108.0 * 0.3)));
  CHECK(geo::sabine_t60(box({4, 6, 3}, 0.7), 3) == doctest::Approx(0.358).epsilon(0.001));
  // Nearly total absorption approaches 0.161 V / S.
  CHECK(geo::sabine_t60(box({4, 6, 3}, 1e-9), 0) == doctest::Approx(0.161 * 72.0 / 108.0).epsilon(1e-6));
  CHECK(geo::sabine_t60(box({8, 12, 6}, 0.7), 2) == doctest::Approx(2.0 * geo::sabine_t60(box({4, 6, 3}, 0.7), 2)));
}
