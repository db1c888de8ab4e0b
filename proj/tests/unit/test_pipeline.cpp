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

#include <cmath>
#include <sstream>
#include <string>

#include "roomrelight/bench/acceptance.hpp"
#include "roomrelight/bench/pipeline.hpp"

using namespace roomrelight;
using nlohmann::json;

namespace {

geo::Scene small_scene() {
  std::vector<geo::MaterialCoeffs> mats(3);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    mats[i].name = "m" + std::to_string(i);
    mats[i].reflectivity.fill(0.8);
  }
  return {geo::RoomModel::shoebox({5, 4, 3}, {0, 0, 1, 1, 2, 2}, mats), {1.2, 1.1, 1.5}, {3.6, 2.7, 1.4}};
}

bench::TraceSettings quick_trace() {
  bench::TraceSettings t;
  t.n_rays = 4000;
  t.max_time = 1.2;
  t.seed = 3;
  return t;
}

}  // namespace

TEST_CASE("band profiles from JSON") {
  const auto& t60 = dsp::BandSet::t60();

  SUBCASE("bare array with a null") {
    const auto p = bench::profile_from_json(json::parse("[0.5, 0.6, null, 0.8, 0.9, 1.0, 1.1]"), t60);
    CHECK(p.value(1) == 0.6);
    CHECK_FALSE(p.valid(2));
    CHECK(p.valid(6));
  }
  SUBCASE("object with a validity mask, nested under a key") {
    const json j = {{"t60", {{"values", {1, 1, 1, 1, 1, 1, 1}}, {"valid", {true, true, true, true, true, true, false}}}}};
    const auto p = bench::profile_from_json(j, t60, "t60");
    CHECK(p.valid(0));
    CHECK_FALSE(p.valid(6));
  }
  SUBCASE("round trip through profile_json") {
    const dsp::BandProfile p(dsp::BandSet::eq(), {1, -2, 3, -4, 5, -6});
    const auto back = bench::profile_from_json(bench::profile_json(p), dsp::BandSet::eq());
    for (std::size_t b = 0; b < p.size(); ++b) CHECK(back.value(b) == p.value(b));
  }
  SUBCASE("malformed") {
    CHECK_THROWS_AS(bench::profile_from_json(json::parse("[1, 2, 3]"), t60), std::invalid_argument);
    CHECK_THROWS_AS(bench::profile_from_json(json::parse("{\"x\": 1}"), t60), std::invalid_argument);
    CHECK_THROWS_AS(bench::profile_from_json(json::parse("[1,1,1,1,1,1,\"a\"]"), t60), std::invalid_argument);
  }
}

TEST_CASE("estimator predictions") {
  const json one = {{"example_id", "a"}, {"head", "t60"}, {"values", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}},
                    {"model_hash", "abc"}};
  json two = one;
  two["example_id"] = "b";
  two["values"] = {0.7, 0.01, 0.5, 0.5, 0.5, 0.5, 0.5};
  json three = one;
  three["example_id"] = "c";
  three["values"] = {0.9, 0.02, 0.5, 0.5, 0.5, 0.5, 0.5};

  CHECK(bench::parse_predictions(one).size() == 1);
  CHECK(bench::parse_predictions(json::array({one, two})).size() == 2);
  const auto recs = bench::parse_predictions({{"records", {one, two, three}}});
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].model_hash == "abc");

  const auto agg = bench::aggregate_predictions(recs, "t60");
  REQUIRE(agg.has_value());
  CHECK(agg->value(0) == doctest::Approx(0.7));
  CHECK(agg->value(1) == doctest::Approx(0.05));
  CHECK_FALSE(bench::aggregate_predictions(recs, "eq").has_value());

  CHECK_THROWS_AS(bench::parse_predictions(json{{"head", "t60"}}), std::runtime_error);
  CHECK_THROWS_AS(bench::parse_predictions(json::parse("42")), std::runtime_error);
}

TEST_CASE("acceptance filter") {
  CHECK(bench::filter_selects("", 3, "sweep"));
  CHECK(bench::filter_selects("3", 3, "sweep"));
  CHECK(bench::filter_selects("swe", 3, "sweep"));
  CHECK(bench::filter_selects("gradient, sweep", 3, "sweep"));
  CHECK_FALSE(bench::filter_selects("gradient", 3, "sweep"));
  CHECK_FALSE(bench::filter_selects("4", 3, "sweep"));
  CHECK(bench::criterion_keys().size() == 8);
}

TEST_CASE("T60 sweep") {
  bench::SweepOptions o;
  o.t60_lo = 0.4;
  o.t60_hi = 0.6;
  o.steps = 2;
  o.realizations = 2;
  o.trace = quick_trace();
  const auto result = bench::run_sweep(small_scene(), o);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].target == 0.4);
  CHECK(result.rows[1].target == 0.6);
  CHECK(result.failures() == 0);

  std::ostringstream csv;
  bench::write_sweep_csv(csv, result);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("target_t60,band_hz", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) rows += line.empty() || line[0] == '#' ? 0 : 1;
  CHECK(rows == 2 * 7);
}

TEST_CASE("matching explicit targets") {
  bench::MatchReference ref;
  ref.t60 = dsp::BandProfile::uniform(dsp::BandSet::t60(), 0.5);
  bench::MatchOptions o;
  o.trace = quick_trace();
  const auto r = bench::run_match(small_scene(), ref, nullptr, o);
  for (std::size_t b = 0; b < r.report.targets.size(); ++b) CHECK(r.report.targets.value(b) == 0.5);
  CHECK_FALSE(r.wet.has_value());
  CHECK(r.materials.size() == 3);
  CHECK(r.report.t60_error < 0.1);
  const json j = r.report.to_json();
  CHECK(j.contains("eq_filter_gains_db"));
  CHECK_THROWS_AS(bench::run_match(small_scene(), bench::MatchReference{}, nullptr, o), std::invalid_argument);
}
