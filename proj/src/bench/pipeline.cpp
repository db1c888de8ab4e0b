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

#include "roomrelight/bench/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/analysis/drr.hpp"
#include "roomrelight/analysis/eq.hpp"
#include "roomrelight/geo/image_source.hpp"
#include "roomrelight/geo/stochastic.hpp"
#include "roomrelight/synth/render.hpp"

namespace roomrelight::bench {
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

dsp::BandProfile t60_or_invalid(const analysis::ImpulseResponse& ir) {
  try {
    return analysis::estimate_t60(ir, dsp::BandSet::t60());
  } catch (const analysis::T60EstimationError& e) {
    return e.profile();
  }
}

}  // namespace

std::vector<geo::PathRecord> trace_scene(const geo::Scene& scene, const TraceSettings& settings) {
  if (settings.tracer == Tracer::kImageSource) {
    return geo::trace_image_source(scene.room, scene.source, scene.listener, settings.image_order);
  }
  geo::StochasticOptions so;
  so.n_rays = settings.n_rays;
  so.max_time = settings.max_time;
  so.detector_radius = settings.detector_radius;
  so.seed = settings.seed;
  geo::StochasticTrace trace = geo::trace_stochastic(scene.room, scene.source, scene.listener, so);
  if (trace.escaped_rays > 0) spdlog::warn("trace: {} rays escaped the room", trace.escaped_rays);
  return std::move(trace.paths);
}

json profile_json(const dsp::BandProfile& p) {
  json bands = json::array(), values = json::array(), valid = json::array();
  for (std::size_t b = 0; b < p.size(); ++b) {
    bands.push_back(p.bands().center(b));
    values.push_back(p.valid(b) ? nullable(p.value(b)) : json(nullptr));
    valid.push_back(p.valid(b));
  }
  return {{"bands_hz", bands}, {"values", values}, {"valid", valid}};
}

dsp::BandProfile profile_from_json(const json& j, const dsp::BandSet& bands, const std::string& key) {
  if (j.is_object() && !key.empty() && j.contains(key)) return profile_from_json(j[key], bands);
  const json* values = &j;
  const json* valid = nullptr;
  if (j.is_object()) {
    if (!j.contains("values")) throw std::invalid_argument("band profile: object has no \"values\" array");
    values = &j["values"];
    if (j.contains("valid")) valid = &j["valid"];
  }
  if (!values->is_array() || values->size() != bands.size()) {
    throw std::invalid_argument(fmt::format("band profile: expected {} values for the {} bands", bands.size(),
                                            bands.name()));
  }
  if (valid && (!valid->is_array() || valid->size() != bands.size())) {
    throw std::invalid_argument("band profile: \"valid\" must match \"values\" in length");
  }
  std::vector<double> v(bands.size(), 0.0);
  std::vector<bool> ok(bands.size(), false);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const json& x = (*values)[b];
    if (x.is_number()) {
      v[b] = x.get<double>();
      ok[b] = std::isfinite(v[b]) && (!valid || (*valid)[b].get<bool>());
      if (!ok[b]) v[b] = 0.0;
    } else if (!x.is_null()) {
      throw std::invalid_argument(fmt::format("band profile: value {} is neither a number nor null", b));
    }
  }
  return dsp::BandProfile(bands, std::move(v), std::move(ok));
}

json analysis_json(const analysis::ImpulseResponse& ir) {
  json j;
  j["sample_rate"] = ir.sample_rate();
  j["length_s"] = ir.buffer().duration_seconds();
  j["direct_time_s"] = ir.direct_time();
  j["t60_s"] = profile_json(t60_or_invalid(ir));
  const analysis::DecayFit full = analysis::fullband_decay(ir);
  j["t60_fullband_s"] = full.valid ? json(full.t60) : json(nullptr);
  try {
    j["eq_db"] = profile_json(analysis::extract_eq(ir));
  } catch (const std::invalid_argument& e) {
    j["eq_db"] = nullptr;
    j["eq_error"] = e.what();
  }
  const analysis::DrrResult drr = analysis::compute_drr(ir);
  j["drr_db"] = nullable(drr.db);
  j["anechoic"] = drr.anechoic;
  return j;
}

EnsembleT60 measure_synthesized_t60(std::span<const geo::PathRecord> paths, const Eigen::MatrixXd& rho,
                                    const geo::AirModel& air, int realizations, int sample_rate,
                                    std::uint64_t seed) {
  if (realizations < 1) throw std::invalid_argument("measure_synthesized_t60: need at least one realization");
  const dsp::BandSet& bands = dsp::BandSet::t60();
  const std::size_t nb = bands.size();
  std::vector<double> slope_sum(nb, 0.0), t_sum(nb, 0.0), t_sq(nb, 0.0);
  std::vector<int> count(nb, 0);
  std::optional<dsp::BandProfile> first;
  for (int k = 0; k < realizations; ++k) {
    synth::SynthesisOptions so;
    so.sample_rate = sample_rate;
    so.seed = seed + static_cast<std::uint64_t>(k);
    const analysis::ImpulseResponse ir = synth::synthesize_ir(paths, rho, air, so);
    const std::vector<analysis::DecayFit> fits = analysis::analyze_decay(ir, bands);
    std::vector<double> values(nb, 0.0);
    std::vector<bool> valid(nb, false);
    for (std::size_t b = 0; b < nb; ++b) {
      if (!fits[b].valid) continue;
      slope_sum[b] += fits[b].slope_db_per_s;
      t_sum[b] += fits[b].t60;
      t_sq[b] += fits[b].t60 * fits[b].t60;
      ++count[b];
      values[b] = fits[b].t60;
      valid[b] = true;
    }
    if (k == 0) first.emplace(bands, values, valid);
  }
  std::vector<double> values(nb, 0.0), spread(nb, kNaN);
  std::vector<bool> valid(nb, false);
  for (std::size_t b = 0; b < nb; ++b) {
    if (count[b] == 0) continue;
    const double mean_slope = slope_sum[b] / count[b];
    valid[b] = 2 * count[b] >= realizations && mean_slope < 0.0;
    values[b] = valid[b] ? -60.0 / mean_slope : 0.0;
    const double mean_t = t_sum[b] / count[b];
    spread[b] = std::sqrt(std::max(0.0, t_sq[b] / count[b] - mean_t * mean_t));
  }
  return {dsp::BandProfile(bands, values, valid), *first, spread};
}

double SweepResult::max_rel_dev() const {
  double worst = 0.0;
  for (const auto& r : rows) {
    if (!r.measured) continue;
    for (std::size_t b = 0; b < r.measured->t60.size(); ++b) {
      if (r.measured->t60.valid(b)) worst = std::max(worst, std::abs(r.measured->t60.value(b) / r.target - 1.0));
    }
  }
  return worst;
}

double SweepResult::max_single_rel_dev() const {
  double worst = 0.0;
  for (const auto& r : rows) {
    if (!r.measured) continue;
    for (std::size_t b = 0; b < r.measured->first.size(); ++b) {
      if (r.measured->first.valid(b)) worst = std::max(worst, std::abs(r.measured->first.value(b) / r.target - 1.0));
    }
  }
  return worst;
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.measured; }));
}

SweepResult run_sweep(const geo::Scene& scene, const SweepOptions& options) {
  if (options.steps < 1) throw std::invalid_argument("sweep: steps must be at least 1");
  if (!(options.t60_lo > 0.0 && options.t60_lo <= options.t60_hi)) {
    throw std::invalid_argument("sweep: need 0 < t60_lo <= t60_hi");
  }
  const std::vector<geo::PathRecord> paths = trace_scene(scene, options.trace);
  SweepResult result;
  for (int i = 0; i < options.steps; ++i) {
    SweepRow row;
    row.target = options.steps == 1 ? options.t60_lo
                                    : options.t60_lo + (options.t60_hi - options.t60_lo) * i / (options.steps - 1);
    try {
      const opt::AllBandsResult fit = opt::optimize_all_bands(
          paths, scene.room.num_materials(), dsp::BandProfile::uniform(dsp::BandSet::t60(), row.target), options.opt);
      for (std::size_t b = 0; b < fit.bands.size(); ++b) {
        if (!fit.bands[b].ok) throw std::runtime_error(fmt::format("band {}: {}", b, fit.bands[b].error));
      }
      row.measured = measure_synthesized_t60(paths, fit.rho, options.opt.air, options.realizations,
                                             options.sample_rate);
    } catch (const std::exception& e) {
      row.error = e.what();
      spdlog::warn("sweep: target {:.3f} s failed: {}", row.target, e.what());
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "target_t60,band_hz,measured_t60,single_t60,spread,rel_dev,valid,error\n";
  const dsp::BandSet& bands = dsp::BandSet::t60();
  for (const auto& r : result.rows) {
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (!r.measured) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        out << fmt::format("{:.6g},{:g},,,,,0,{}\n", r.target, bands.center(b), err);
        continue;
      }
      const auto& m = *r.measured;
      const bool ok = m.t60.valid(b);
      out << fmt::format("{:.6g},{:g},{},{},{},{},{},\n", r.target, bands.center(b),
                         ok ? fmt::format("{:.6g}", m.t60.value(b)) : "",
                         m.first.valid(b) ? fmt::format("{:.6g}", m.first.value(b)) : "",
                         std::isfinite(m.spread[b]) ? fmt::format("{:.6g}", m.spread[b]) : "",
                         ok ? fmt::format("{:.6g}", m.t60.value(b) / r.target - 1.0) : "", ok ? 1 : 0);
    }
  }
  out << fmt::format("# max_rel_dev={:.6g} max_single_rel_dev={:.6g} failures={}\n", result.max_rel_dev(),
                     result.max_single_rel_dev(), result.failures());
}

json MatchReport::to_json() const {
  json j;
  j["reference_t60_s"] = profile_json(reference_t60);
  j["reference_eq_db"] = reference_eq ? profile_json(*reference_eq) : json(nullptr);
  j["targets_t60_s"] = profile_json(targets);
  j["simulated_t60_s"] = profile_json(simulated_t60);
  j["final_t60_s"] = profile_json(final_t60);
  j["simulated_eq_db"] = profile_json(simulated_eq);
  j["final_eq_db"] = profile_json(final_eq);
  j["eq_filter_gains_db"] = eq_filter.gains_db;
  json errs = json::array();
  for (double e : t60_band_error) errs.push_back(nullable(e));
  j["t60_band_error_s"] = errs;
  j["t60_error_s"] = nullable(t60_error);
  j["eq_error_db"] = eq_error ? nullable(*eq_error) : json(nullptr);
  json bj = json::array();
  for (const auto& b : bands) {
    bj.push_back({{"target_t60_s", b.target_t60},
                  {"inherited", b.inherited},
                  {"source_band", b.source_band ? json(*b.source_band) : json(nullptr)},
                  {"fit_target_t60_s", b.fit_target_t60},
                  {"envelope_t60_s", b.envelope_t60},
                  {"calibration_steps", b.calibration_steps},
                  {"objective", b.result.objective},
                  {"iterations", b.result.iterations},
                  {"converged", b.result.converged},
                  {"ok", b.ok},
                  {"error", b.error}});
  }
  j["optimization"] = bj;
  j["normalization"] = normalization;
  return j;
}

MatchResult run_match(const geo::Scene& scene, const MatchReference& reference, const dsp::AudioBuffer* dry,
                      const MatchOptions& options) {
  std::optional<dsp::BandProfile> ref_t60, ref_eq;
  if (reference.ir) {
    ref_t60 = t60_or_invalid(*reference.ir);
    if (!ref_t60->any_valid()) throw std::runtime_error("match: no band of the reference IR has a measurable T60");
    ref_eq = analysis::extract_eq(*reference.ir);
  } else {
    if (!reference.t60) throw std::invalid_argument("match: reference needs an IR or T60 targets");
    ref_t60 = reference.t60;
    ref_eq = reference.eq;
  }

  const std::vector<geo::PathRecord> paths = trace_scene(scene, options.trace);
  const opt::AllBandsResult fit = opt::optimize_all_bands(paths, scene.room.num_materials(), *ref_t60, options.opt);
  const analysis::ImpulseResponse sim = synth::synthesize_ir(paths, fit.rho, options.opt.air, options.synthesis);
  const dsp::BandProfile sim_eq = analysis::extract_eq(sim);

  synth::EqFilterSpec spec;
  if (ref_eq) spec = synth::EqFilterSpec::from_delta(*ref_eq, sim_eq);
  analysis::ImpulseResponse out = synth::apply_eq(sim, spec);
  dsp::BandProfile got = analysis::extract_eq(out);
  for (int pass = 1; ref_eq && pass < options.eq_passes; ++pass) {
    double worst = 0.0;
    synth::EqFilterSpec next = spec;
    for (std::size_t b = 0; b < dsp::kNumEqBands; ++b) {
      if (!ref_eq->valid(b) || !got.valid(b)) continue;
      const double err = ref_eq->value(b) - got.value(b);
      worst = std::max(worst, std::abs(err));
      next.gains_db[b] += err;
    }
    if (worst < options.eq_tolerance_db) break;
    spec = next;
    out = synth::apply_eq(sim, spec);
    got = analysis::extract_eq(out);
  }

  MatchReport rep{*ref_t60, ref_eq, opt::inherit_invalid_targets(*ref_t60), t60_or_invalid(sim), t60_or_invalid(out),
                  sim_eq, got, spec, {}, 0.0, std::nullopt, fit.bands, 1.0};
  double sum = 0.0;
  int n = 0;
  for (std::size_t b = 0; b < ref_t60->size(); ++b) {
    const bool both = ref_t60->valid(b) && rep.simulated_t60.valid(b);
    const double e = both ? std::abs(ref_t60->value(b) - rep.simulated_t60.value(b)) : kNaN;
    rep.t60_band_error.push_back(e);
    if (both) {
      sum += e;
      ++n;
    }
  }
  rep.t60_error = n > 0 ? sum / n : kNaN;
  if (ref_eq) {
    double es = 0.0;
    int en = 0;
    for (std::size_t b = 0; b < ref_eq->size(); ++b) {
      if (ref_eq->valid(b) && got.valid(b)) {
        es += std::abs(ref_eq->value(b) - got.value(b));
        ++en;
      }
    }
    rep.eq_error = en > 0 ? es / en : kNaN;
  }

  std::optional<dsp::AudioBuffer> wet;
  if (dry != nullptr) {
    synth::RenderResult r = synth::render(*dry, out, options.wet_gain, options.dry_gain);
    rep.normalization = r.normalization;
    wet = std::move(r.audio);
  }
  return {std::move(rep), std::move(out), fit.apply_to(scene.room.materials()), std::move(wet)};
}

std::vector<Prediction> parse_predictions(const json& j) {
  const json* list = &j;
  json wrapped;
  if (j.is_object() && j.contains("records")) {
    list = &j.at("records");
  } else if (j.is_object()) {
    wrapped = json::array({j});
    list = &wrapped;
  }
  if (!list->is_array()) throw std::runtime_error("predictions: expected an object or an array of records");
  std::vector<Prediction> out;
  for (const auto& r : *list) {
    Prediction p;
    try {
      p.example_id = r.value("example_id", std::string{});
      p.head = r.at("head").get<std::string>();
      p.values = r.at("values").get<std::vector<double>>();
      p.model_hash = r.value("model_hash", std::string{});
    } catch (const json::exception& e) {
      throw std::runtime_error(fmt::format("predictions: malformed record: {}", e.what()));
    }
    const std::size_t want = p.head == "t60" ? dsp::kNumT60Bands : p.head == "eq" ? dsp::kNumEqBands : 0;
    if (want == 0) throw std::runtime_error(fmt::format("predictions: unknown head '{}'", p.head));
    if (p.values.size() != want) {
      throw std::runtime_error(fmt::format("predictions: {} head needs {} values, record {} has {}", p.head, want,
                                           p.example_id, p.values.size()));
    }
    for (double v : p.values) {
      if (!std::isfinite(v)) throw std::runtime_error(fmt::format("predictions: non-finite value in {}", p.example_id));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  try {
    return parse_predictions(json::parse(in));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::optional<dsp::BandProfile> aggregate_predictions(const std::vector<Prediction>& records, const std::string& head) {
  std::vector<const Prediction*> hits;
  for (const auto& r : records) {
    if (r.head == head) hits.push_back(&r);
  }
  if (hits.empty()) return std::nullopt;
  const dsp::BandSet& bands = head == "t60" ? dsp::BandSet::t60() : dsp::BandSet::eq();
  std::vector<double> values(bands.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    std::vector<double> v;
    for (const Prediction* p : hits) v.push_back(p->values[b]);
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    values[b] = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    if (head == "t60") values[b] = std::max(values[b], 0.05);
  }
  return dsp::BandProfile(bands, std::move(values));
}

}  // namespace roomrelight::bench
