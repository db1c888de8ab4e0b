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
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/dsp/audio.hpp"
#include "roomrelight/dsp/bands.hpp"
#include "roomrelight/geo/path.hpp"
#include "roomrelight/geo/room.hpp"
#include "roomrelight/opt/material_opt.hpp"
#include "roomrelight/synth/equalizer.hpp"
#include "roomrelight/synth/synthesis.hpp"

namespace roomrelight::bench {

enum class Tracer { kStochastic, kImageSource };

struct TraceSettings {
  Tracer tracer = Tracer::kStochastic;
  std::size_t n_rays = 20000;
  double max_time = 2.5;
  double detector_radius = 0.5;
  int image_order = 30;
  std::uint64_t seed = 0;
};

/// Paths from the scene's source to its listener.
std::vector<geo::PathRecord> trace_scene(const geo::Scene& scene, const TraceSettings& settings);

/// T60, EQ and DRR of an IR as JSON (invalid bands are null).
nlohmann::json analysis_json(const analysis::ImpulseResponse& ir);
nlohmann::json profile_json(const dsp::BandProfile& profile);

/// Accepts a bare array (null marks an invalid band), or an object with
/// "values" and optional "valid" as written by profile_json. An object may
/// also nest the profile under `key` (for example {"t60_s": {...}}).
///
/// Throws std::invalid_argument on a malformed document or wrong band count.
dsp::BandProfile profile_from_json(const nlohmann::json& j, const dsp::BandSet& bands, const std::string& key = "");

/// Per-band T60 of the synthesized response process: the mean decay slope
/// over `realizations` sign seeds, converted to T60. A band counts as valid
/// when at least half the realizations fit.
struct EnsembleT60 {
  dsp::BandProfile t60;
  dsp::BandProfile first;  ///< the seed-0 realization alone
  std::vector<double> spread;  ///< standard deviation of the per-realization T60
};
EnsembleT60 measure_synthesized_t60(std::span<const geo::PathRecord> paths, const Eigen::MatrixXd& rho,
                                    const geo::AirModel& air, int realizations, int sample_rate,
                                    std::uint64_t seed = 0);

struct SweepOptions {
  double t60_lo = 0.2;
  double t60_hi = 1.5;
  int steps = 10;
  int realizations = 16;
  int sample_rate = 16000;
  opt::MaterialOptOptions opt;
  TraceSettings trace;
};

struct SweepRow {
  double target = 0.0;
  std::optional<EnsembleT60> measured;
  std::string error;  ///< set when this target failed
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Largest |measured / target - 1| over valid bands of successful rows.
  [[nodiscard]] double max_rel_dev() const;
  [[nodiscard]] double max_single_rel_dev() const;
  [[nodiscard]] std::size_t failures() const;
};

/// Uniform targets from t60_lo to t60_hi: optimize all bands, synthesize,
/// re-measure. One trace serves every target. A failing target is recorded
/// and the sweep continues.
SweepResult run_sweep(const geo::Scene& scene, const SweepOptions& options);
/// target_t60, band_hz, measured_t60, single_t60, spread, rel_dev, valid,
/// error; one row per target and band, then a summary comment line.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// What a match aims for: a measured IR, or explicit band targets.
struct MatchReference {
  std::optional<analysis::ImpulseResponse> ir;
  std::optional<dsp::BandProfile> t60;  ///< used when `ir` is unset
  std::optional<dsp::BandProfile> eq;   ///< used when `ir` is unset
};

struct MatchOptions {
  opt::MaterialOptOptions opt;
  TraceSettings trace;
  synth::SynthesisOptions synthesis;
  int eq_passes = 3;
  double eq_tolerance_db = 0.25;
  double wet_gain = 1.0;
  double dry_gain = 0.0;
};

struct MatchReport {
  dsp::BandProfile reference_t60;
  std::optional<dsp::BandProfile> reference_eq;
  dsp::BandProfile targets;        ///< reference T60 after mask inheritance
  /// Of the synthesized IR before equalization. The high-band floor of the
  /// EQ leaves the 8 kHz octave of the final IR dominated by leakage from
  /// below, so its decay no longer reflects the fitted materials.
  dsp::BandProfile simulated_t60;
  dsp::BandProfile final_t60;      ///< of the equalized IR, informative
  dsp::BandProfile simulated_eq;   ///< before equalization
  dsp::BandProfile final_eq;
  synth::EqFilterSpec eq_filter;
  std::vector<double> t60_band_error;  ///< |reference - simulated|, NaN where either is invalid
  double t60_error = 0.0;              ///< mean over bands valid in both
  std::optional<double> eq_error;      ///< mean |reference - final| over bands valid in both
  std::vector<opt::BandOptimization> bands;
  double normalization = 1.0;          ///< peak normalization applied by render

  [[nodiscard]] nlohmann::json to_json() const;
};

struct MatchResult {
  MatchReport report;
  analysis::ImpulseResponse ir;
  std::vector<geo::MaterialCoeffs> materials;  ///< fitted
  std::optional<dsp::AudioBuffer> wet;
};

/// Analyze the reference, fit materials to its T60s, synthesize, equalize
/// towards its EQ and, when `dry` is given, render. The EQ filter is
/// corrected for a few passes against the measured output EQ.
MatchResult run_match(const geo::Scene& scene, const MatchReference& reference, const dsp::AudioBuffer* dry,
                      const MatchOptions& options);

/// One prediction of the estimator: {"example_id", "head": "t60"|"eq",
/// "values": [...], "model_hash"}.
struct Prediction {
  std::string example_id;
  std::string head;
  std::vector<double> values;
  std::string model_hash;
};

/// Reads a prediction file: a single record, an array of records or
/// {"records": [...]}. Throws std::runtime_error on malformed content.
std::vector<Prediction> read_predictions(const std::filesystem::path& path);
std::vector<Prediction> parse_predictions(const nlohmann::json& j);

/// Per-band median over all records of `head` ("t60" clamps to >= 0.05 s).
/// Returns nullopt when there is no such record.
std::optional<dsp::BandProfile> aggregate_predictions(const std::vector<Prediction>& records, const std::string& head);

}  // namespace roomrelight::bench
