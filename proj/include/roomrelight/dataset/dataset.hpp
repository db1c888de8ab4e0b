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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/dataset/example.hpp"
#include "roomrelight/dataset/speech.hpp"

namespace roomrelight::dataset {

inline constexpr int kManifestVersion = 1;

enum class Split { kTrain, kVal, kTest };
inline constexpr std::array<Split, 3> kSplits{Split::kTrain, Split::kVal, Split::kTest};
const char* split_name(Split s);

struct IrSource {
  std::string ir_id;
  analysis::ImpulseResponse ir;
};

struct NoiseSource {
  std::string name;
  dsp::AudioBuffer audio;
};

/// Fractions of the speaker and IR inventories assigned to each split.
/// Validation and test each get at least one member.
struct SplitRules {
  double train = 2.0 / 3.0;
  double val = 1.0 / 6.0;
  double test = 1.0 / 6.0;
};

struct DatasetOptions {
  SplitRules rules;
  std::array<std::size_t, 3> counts{2000, 400, 400};  ///< train, val, test
  double snr_lo_db = 10.0;
  double snr_hi_db = 30.0;
  bool noiseless = false;
  std::uint64_t seed = 0;
  ExampleOptions example;
};

struct ManifestEntry {
  std::string id;
  std::string features_path;  ///< relative to the manifest
  std::vector<std::size_t> tensor_shape;
  std::vector<double> t60_labels;
  std::vector<double> eq_labels;
  std::vector<bool> t60_valid;
  std::vector<bool> eq_valid;
  Split split = Split::kTrain;
  std::string speaker_id;
  std::string ir_id;
  double snr_db = 0.0;  ///< +inf for noiseless clips
  std::size_t window_start = 0;
};

struct DatasetManifest {
  int version = kManifestVersion;
  std::uint64_t seed = 0;
  int sample_rate = kFeatureRate;
  std::vector<std::size_t> tensor_shape;
  std::array<std::vector<std::string>, 3> speakers;  ///< per split
  std::array<std::vector<std::string>, 3> irs;       ///< per split
  std::vector<ManifestEntry> examples;
  double norm_mean = 0.0;
  double norm_std = 1.0;

  [[nodiscard]] nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j);
};

/// Split-hygiene violations found from the manifest alone: speakers or IRs
/// shared between splits and tensor shapes that differ from the manifest's.
/// Empty when clean.
std::vector<std::string> check_manifest(const DatasetManifest& manifest);

/// Partitions ids (sorted, then shuffled by `seed`) into train/val/test.
/// Throws std::invalid_argument naming the inventory when it is too small
/// for three non-empty splits.
std::array<std::vector<std::string>, 3> partition_ids(std::vector<std::string> ids, const SplitRules& rules,
                                                      std::uint64_t seed, const std::string& what);

/// Generates the examples into out_dir/features/*.ft and writes
/// out_dir/manifest.json. Speakers and IRs are partitioned disjointly,
/// labels are measured once per IR at 16 kHz, and the normalization is the
/// global mean and standard deviation of the training features.
///
/// Throws std::invalid_argument when an inventory cannot be split, a split
/// has no usable speech or IR, or an option is malformed.
DatasetManifest build_dataset(const std::vector<SpeechSource>& speech, const std::vector<IrSource>& irs,
                              const std::vector<NoiseSource>& noise, const DatasetOptions& options,
                              const std::filesystem::path& out_dir);

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);

/// WAV speech under `dir`: files in per-speaker subdirectories take the
/// directory name as speaker id, files directly in `dir` use the part of
/// the file stem before the first '_'.
std::vector<SpeechSource> load_speech_corpus(const std::filesystem::path& dir);
/// Every WAV under `dir` as an IR; the id is the relative path without extension.
std::vector<IrSource> load_ir_corpus(const std::filesystem::path& dir);
std::vector<NoiseSource> load_noise_corpus(const std::filesystem::path& dir);

}  // namespace roomrelight::dataset
