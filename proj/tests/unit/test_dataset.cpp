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
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/augment/synthetic.hpp"
#include "roomrelight/dataset/dataset.hpp"
#include "roomrelight/dataset/example.hpp"
#include "roomrelight/dataset/speech.hpp"
#include "roomrelight/dataset/tensor_io.hpp"
#include "roomrelight/dsp/spectrum.hpp"

using namespace roomrelight;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("roomrelight_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<dataset::IrSource> exponential_irs(std::size_t n) {
  std::vector<dataset::IrSource> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"exp" + std::to_string(i), augment::make_exponential_ir(0.3 + 0.15 * i, 1.5, 16000, 40 + i)});
  }
  return out;
}

}  // namespace

TEST_CASE("feature tensor files") {
  const fs::path dir = scratch_dir("tensor");
  Eigen::MatrixXd m(3, 5);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 5; ++c) m(r, c) = 0.25 * r - 1.5 * c;
  const auto t = dataset::FeatureTensor::from_matrix(m);
  CHECK(t.shape == std::vector<std::size_t>{3, 5});
  CHECK(t.data[1] == -1.5f);  // row major

  dataset::write_tensor(dir / "a.ft", t);
  const auto back = dataset::read_tensor(dir / "a.ft");
  CHECK(back.shape == t.shape);
  CHECK(back.data == t.data);
  CHECK(back.to_matrix() == m);

  SUBCASE("truncated payload") {
    fs::resize_file(dir / "a.ft", fs::file_size(dir / "a.ft") - 4);
    CHECK_THROWS_AS(dataset::read_tensor(dir / "a.ft"), std::runtime_error);
  }
  SUBCASE("shape mismatch") {
    dataset::FeatureTensor bad{{2, 2}, {1.0f, 2.0f, 3.0f}};
    CHECK_THROWS_AS(dataset::write_tensor(dir / "b.ft", bad), std::invalid_argument);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(dataset::read_tensor(dir / "nope.ft"), std::runtime_error); }
}

TEST_CASE("synthetic speech") {
  const auto a = dataset::synth_speech(dataset::voice_for_speaker(0, 3), 5.0, 11);
  const auto a2 = dataset::synth_speech(dataset::voice_for_speaker(0, 3), 5.0, 11);
  const auto b = dataset::synth_speech(dataset::voice_for_speaker(1, 3), 5.0, 11);
  CHECK(a.size() == 80000);
  CHECK(std::ranges::equal(a.samples(), a2.samples()));
  CHECK(a.peak_abs() == doctest::Approx(0.5));

  const std::vector<double> centers{125, 250, 500, 1000, 2000, 4000};
  const auto la = dsp::octave_band_levels_db(a.samples(), 16000, centers);
  const auto lb = dsp::octave_band_levels_db(b.samples(), 16000, centers);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) max_diff = std::max(max_diff, std::abs(la[i] - lb[i]));
  CHECK(max_diff > 2.0);

  const auto corpus = dataset::synth_speech_corpus(3, 0.1, 5);
  REQUIRE(corpus.size() == 3);
  CHECK(corpus[2].speaker_id == "synth_spk02");
  CHECK(corpus[0].audio.size() == 96000);
  CHECK_THROWS_AS(dataset::synth_speech_corpus(0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("training examples") {
  const auto speech = dataset::synth_speech(dataset::voice_for_speaker(2, 1), 8.0, 4);
  const auto ir = augment::make_exponential_ir(0.6, 1.5, 16000, 8);
  const dataset::IrLabels labels = dataset::measure_labels(ir);

  SUBCASE("noiseless clip shape and labels") {
    std::mt19937_64 rng(1);
    const auto ex = dataset::make_example(speech, ir, nullptr, std::numeric_limits<double>::infinity(), rng);
    CHECK(ex.features.shape.size() == 2);
    CHECK(ex.features.shape[0] == 32);
    CHECK(std::isinf(ex.snr_db));
    const auto t60 = analysis::estimate_t60(ir, dsp::BandSet::t60());
    for (std::size_t b = 0; b < t60.size(); ++b) CHECK(ex.labels.t60.value(b) == t60.value(b));
  }

  SUBCASE("injected noise lands on the requested SNR") {
    for (double snr : {10.0, 20.0, 30.0}) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(snr));
      const auto ex = dataset::make_example(speech, ir, labels, nullptr, snr, rng);
      CHECK(std::abs(ex.measured_snr_db - snr) < 0.5);
    }
  }

  SUBCASE("same seed, same example") {
    std::mt19937_64 r1(9), r2(9);
    const auto e1 = dataset::make_example(speech, ir, labels, nullptr, 15.0, r1);
    const auto e2 = dataset::make_example(speech, ir, labels, nullptr, 15.0, r2);
    CHECK(e1.window_start == e2.window_start);
    CHECK(e1.features.data == e2.features.data);
  }

  SUBCASE("speech shorter than a clip") {
    std::mt19937_64 rng(1);
    const auto short_speech = dataset::synth_speech(dataset::voice_for_speaker(0, 1), 2.0, 4);
    CHECK_THROWS_AS(dataset::make_example(short_speech, ir, labels, nullptr, 20.0, rng), std::invalid_argument);
  }

  SUBCASE("silence never passes the activity gate") {
    std::mt19937_64 rng(1);
    const dsp::AudioBuffer silence(std::vector<double>(16000 * 6, 0.0), 16000);
    CHECK_THROWS_AS(dataset::make_example(silence, ir, labels, nullptr, 20.0, rng), std::runtime_error);
  }
}

TEST_CASE("id partition") {
  std::vector<std::string> ids;
  for (int i = 0; i < 12; ++i) ids.push_back("s" + std::to_string(i));
  const auto parts = dataset::partition_ids(ids, {}, 3, "speakers");
  CHECK(parts[0].size() == 8);
  CHECK(parts[1].size() == 2);
  CHECK(parts[2].size() == 2);
  std::set<std::string> all;
  for (const auto& p : parts) all.insert(p.begin(), p.end());
  CHECK(all.size() == 12);
  CHECK(dataset::partition_ids(ids, {}, 3, "speakers") == parts);
  CHECK_THROWS_AS(dataset::partition_ids({"a", "b"}, {}, 3, "speakers"), std::invalid_argument);
}

TEST_CASE("dataset build") {
  const auto speech = dataset::synth_speech_corpus(12, 0.1, 21);
  const auto irs = exponential_irs(6);
  dataset::DatasetOptions opt;
  opt.counts = {8, 3, 3};
  opt.seed = 4;

  const fs::path dir = scratch_dir("dataset");
  const auto m = dataset::build_dataset(speech, irs, {}, opt, dir / "a");

  CHECK(m.examples.size() == 14);
  CHECK(m.speakers[0].size() == 8);
  CHECK(m.speakers[1].size() == 2);
  CHECK(m.speakers[2].size() == 2);
  CHECK(dataset::check_manifest(m).empty());
  CHECK(m.norm_std > 0.0);

  std::map<std::string, const dataset::IrSource*> by_id;
  for (const auto& s : irs) by_id[s.ir_id] = &s;
  for (const auto& e : m.examples) {
    CHECK(fs::exists(dir / "a" / e.features_path));
    CHECK(e.snr_db >= 10.0);
    CHECK(e.snr_db <= 30.0);
    const auto t60 = analysis::estimate_t60(by_id.at(e.ir_id)->ir, dsp::BandSet::t60());
    REQUIRE(e.t60_labels.size() == t60.size());
    for (std::size_t b = 0; b < t60.size(); ++b) {
      if (t60.valid(b)) CHECK(e.t60_labels[b] == doctest::Approx(t60.value(b)));
    }
  }

  SUBCASE("manifest round trip") {
    const auto back = dataset::read_manifest(dir / "a" / "manifest.json");
    CHECK(back.to_json() == m.to_json());
  }

  SUBCASE("same seed, same manifest") {
    const auto again = dataset::build_dataset(speech, irs, {}, opt, dir / "b");
    CHECK(again.to_json() == m.to_json());
  }

  SUBCASE("hygiene check finds a shared speaker") {
    auto bad = m;
    bad.speakers[2].push_back(bad.speakers[0].front());
    CHECK_FALSE(dataset::check_manifest(bad).empty());
  }

  SUBCASE("too few IRs to split") {
    CHECK_THROWS_AS(dataset::build_dataset(speech, exponential_irs(2), {}, opt, dir / "c"), std::invalid_argument);
  }
}
