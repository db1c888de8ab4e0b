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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "common.hpp"
#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/analysis/eq.hpp"
#include "roomrelight/augment/augmentation.hpp"
#include "roomrelight/augment/corpus.hpp"
#include "roomrelight/augment/synthetic.hpp"
#include "roomrelight/bench/acceptance.hpp"
#include "roomrelight/dataset/dataset.hpp"
#include "roomrelight/dataset/speech.hpp"
#include "roomrelight/dsp/wav.hpp"
#include "roomrelight/geo/room_io.hpp"
#include "roomrelight/synth/equalizer.hpp"
#include "roomrelight/synth/render.hpp"
#include "roomrelight/synth/synthesis.hpp"

namespace roomrelight::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

dsp::BandProfile measured_t60(const analysis::ImpulseResponse& ir) {
  try {
    return analysis::estimate_t60(ir, dsp::BandSet::t60());
  } catch (const analysis::T60EstimationError& e) {
    spdlog::warn("{}", e.what());
    return e.profile();
  }
}

analysis::ImpulseResponse simulate(const geo::Scene& scene, const TraceFlags& trace, std::uint64_t seed,
                                   int sample_rate) {
  const auto paths = bench::trace_scene(scene, trace.resolve(seed));
  synth::SynthesisOptions so;
  so.sample_rate = sample_rate;
  so.seed = seed;
  return synth::synthesize_ir(paths, scene.room.materials(), trace.air_model(), so);
}

// ---------------------------------------------------------------- analyze-ir

class AnalyzeIr final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("analyze-ir", "Per-band T60, EQ and DRR of an impulse response");
    app_->add_option("ir", input_, "Impulse response WAV")->required()->check(CLI::ExistingFile);
    app_->add_option("--bands", bands_, "Which band measurements to report")
        ->check(CLI::IsMember({"t60", "eq", "all"}))
        ->capture_default_str();
    app_->add_flag("--json", json_, "Print JSON instead of a table");
    app_->add_option("-o,--output", output_, "Also write the JSON report here");
  }

  [[nodiscard]] json config() const override {
    return {{"ir", input_.string()}, {"bands", bands_}, {"json", json_}, {"output", output_.string()}};
  }

  int run() override {
    const analysis::ImpulseResponse ir(dsp::read_wav(input_));
    json j = bench::analysis_json(ir);
    j["input"] = input_.string();
    if (bands_ == "eq") {
      j.erase("t60_s");
      j.erase("t60_fullband_s");
    } else if (bands_ == "t60") {
      j.erase("eq_db");
    }
    if (!output_.empty()) write_json_file(output_path(output_), j);
    if (json_) {
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    std::cout << fmt::format("{}  {} Hz, {:.3f} s, direct at {:.2f} ms\n", input_.string(), ir.sample_rate(),
                             ir.buffer().duration_seconds(), 1000.0 * ir.direct_time());
    for (const char* key : {"t60_s", "eq_db"}) {
      if (!j.contains(key) || j[key].is_null()) continue;
      const json& p = j[key];
      std::cout << (std::string(key) == "t60_s" ? "T60 (s)" : "EQ (dB)") << '\n';
      for (std::size_t b = 0; b < p["values"].size(); ++b) {
        const json& v = p["values"][b];
        std::cout << fmt::format("  {:>7g} Hz  {}\n", p["bands_hz"][b].get<double>(),
                                 v.is_null() ? std::string("unreliable") : fmt::format("{:.3f}", v.get<double>()));
      }
    }
    if (j.contains("t60_fullband_s") && !j["t60_fullband_s"].is_null()) {
      std::cout << fmt::format("broadband T60 {:.3f} s\n", j["t60_fullband_s"].get<double>());
    }
    std::cout << (j["drr_db"].is_null() ? std::string("DRR: anechoic\n")
                                        : fmt::format("DRR {:.2f} dB\n", j["drr_db"].get<double>()));
    return 0;
  }

 private:
  fs::path input_;
  std::string bands_ = "all";
  bool json_ = false;
  fs::path output_;
};

// ------------------------------------------------------------------- augment

class Augment final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("augment", "Generate a T60-balanced, DRR and EQ augmented IR corpus");
    app_->add_option("ir_dir", input_, "Directory of source IR WAVs")->required()->check(CLI::ExistingDirectory);
    app_->add_option("-o,--output", output_, "Output directory (under --output-dir)")->capture_default_str();
    app_->add_option("--spec", spec_file_, "JSON with any of t60_lo, t60_hi, t60_grid, drr_lo, drr_hi, "
                                          "augment_drr, eq_std_inflation, count")
        ->check(CLI::ExistingFile);
    app_->add_option("--count", count_, "Number of augmented IRs");
    app_->add_option("--t60-lo", t60_lo_, "Lower edge of the target T60 range (s)");
    app_->add_option("--t60-hi", t60_hi_, "Upper edge of the target T60 range (s)");
    app_->add_option("--grid", grid_, "Number of equal-width T60 bins");
    app_->add_option("--inflation", inflation_, "Multiplier on the corpus EQ standard deviation");
    app_->add_flag("--no-drr", no_drr_, "Keep the source DRR");
  }

  [[nodiscard]] json config() const override {
    json j = spec_json(resolve());
    j["ir_dir"] = input_.string();
    j["output"] = output_.string();
    j["spec_file"] = spec_file_.string();
    return j;
  }

  int run() override {
    std::vector<dataset::IrSource> sources = dataset::load_ir_corpus(input_);
    std::vector<analysis::ImpulseResponse> irs;
    for (const auto& s : sources) irs.push_back(s.ir);
    augment::AugmentationSpec spec = resolve();
    spec.eq_model = augment::fit_eq_distribution(irs);
    const auto items = augment::build_augmented_corpus(irs, spec);

    const fs::path dir = output_path(output_ / "index.json").parent_path();
    for (const auto& e : items) {
      const std::string stem = fmt::format("aug_{:06}", e.index);
      dsp::write_wav(dir / (stem + ".wav"), e.ir.buffer());
      json labels = {{"source", sources[e.source_index].ir_id},
                     {"direct_index", e.ir.direct_index()},
                     {"target_t60_s", e.target_t60},
                     {"target_drr_db", spec.augment_drr ? json(e.target_drr_db) : json(nullptr)},
                     {"target_eq_db", bench::profile_json(e.target_eq)},
                     {"t60_fullband_s", e.t60_fullband},
                     {"t60_s", bench::profile_json(e.t60)},
                     {"eq_db", bench::profile_json(e.eq)},
                     {"drr_db", e.drr_anechoic ? json(nullptr) : json(e.drr_db)}};
      write_json_file(dir / (stem + ".json"), labels);
    }
    json index = spec_json(spec);
    index["sources"] = sources.size();
    index["written"] = items.size();
    index["t60_histogram"] = augment::t60_histogram(items, spec);
    index["source_eq_mean_db"] = spec.eq_model.mean_db;
    index["source_eq_std_db"] = spec.eq_model.std_db;
    write_json_file(dir / "index.json", index);
    spdlog::info("augment: wrote {} of {} IRs to {}", items.size(), spec.count, dir.string());
    return items.size() == spec.count ? 0 : 1;
  }

 private:
  [[nodiscard]] augment::AugmentationSpec resolve() const {
    augment::AugmentationSpec s;
    s.seed = global_.seed;
    if (!spec_file_.empty()) {
      const json j = read_json_file(spec_file_);
      s.t60_lo = j.value("t60_lo", s.t60_lo);
      s.t60_hi = j.value("t60_hi", s.t60_hi);
      s.t60_grid = j.value("t60_grid", s.t60_grid);
      s.drr_lo = j.value("drr_lo", s.drr_lo);
      s.drr_hi = j.value("drr_hi", s.drr_hi);
      s.augment_drr = j.value("augment_drr", s.augment_drr);
      s.eq_std_inflation = j.value("eq_std_inflation", s.eq_std_inflation);
      s.count = j.value("count", s.count);
    }
    if (count_) s.count = *count_;
    if (t60_lo_) s.t60_lo = *t60_lo_;
    if (t60_hi_) s.t60_hi = *t60_hi_;
    if (grid_) s.t60_grid = *grid_;
    if (inflation_) s.eq_std_inflation = *inflation_;
    if (no_drr_) s.augment_drr = false;
    return s;
  }

  static json spec_json(const augment::AugmentationSpec& s) {
    return {{"t60_lo", s.t60_lo},   {"t60_hi", s.t60_hi}, {"t60_grid", s.t60_grid},
            {"drr_lo", s.drr_lo},   {"drr_hi", s.drr_hi}, {"augment_drr", s.augment_drr},
            {"eq_std_inflation", s.eq_std_inflation},     {"count", s.count}, {"seed", s.seed}};
  }

  fs::path input_;
  fs::path output_ = "augmented";
  fs::path spec_file_;
  std::optional<std::size_t> count_;
  std::optional<double> t60_lo_, t60_hi_, inflation_;
  std::optional<int> grid_;
  bool no_drr_ = false;
};

// --------------------------------------------------------------- simulate-ir

class SimulateIr final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("simulate-ir", "Trace a room and synthesize its impulse response");
    app_->add_option("room", room_, "Room JSON")->required()->check(CLI::ExistingFile);
    app_->add_option("-o,--output", output_, "IR WAV")->capture_default_str();
    app_->add_option("--analysis", analysis_, "Per-band analysis JSON (default: next to the WAV)");
    app_->add_option("--db-envelope", envelope_, "CSV of the dB envelope over time");
    app_->add_option("--frame-ms", frame_ms_, "Envelope frame length")->check(CLI::PositiveNumber)->capture_default_str();
    app_->add_option("--fs", sample_rate_, "Output sample rate")
        ->check(CLI::Range(synth::kMinSynthesisRate, 192000))
        ->capture_default_str();
    trace_.add_to(*app_);
  }

  [[nodiscard]] json config() const override {
    return {{"room", room_.string()},     {"output", output_.string()},  {"analysis", analysis_.string()},
            {"db_envelope", envelope_.string()}, {"frame_ms", frame_ms_}, {"fs", sample_rate_},
            {"trace", trace_.to_json()}};
  }

  int run() override {
    const geo::Scene scene = geo::load_scene(room_);
    const auto paths = bench::trace_scene(scene, trace_.resolve(global_.seed));
    synth::SynthesisOptions so;
    so.sample_rate = sample_rate_;
    so.seed = global_.seed;
    const analysis::ImpulseResponse ir = synth::synthesize_ir(paths, scene.room.materials(), trace_.air_model(), so);

    const fs::path wav = output_path(output_);
    dsp::write_wav(wav, ir.buffer());
    json j = bench::analysis_json(ir);
    j["paths"] = paths.size();
    std::vector<double> sabine;
    for (std::size_t b = 0; b < dsp::kNumT60Bands; ++b) sabine.push_back(geo::sabine_t60(scene.room, b));
    j["sabine_t60_s"] = sabine;
    const fs::path report = analysis_.empty() ? fs::path(wav).replace_extension(".json") : output_path(analysis_);
    write_json_file(report, j);

    if (!envelope_.empty()) {
      const fs::path csv = output_path(envelope_);
      std::ofstream out(csv);
      out << "time_s,level_db\n";
      for (const auto& p : synth::db_envelope(ir, frame_ms_ / 1000.0)) {
        out << fmt::format("{:.4f},{}\n", p.time_s, std::isfinite(p.level_db) ? fmt::format("{:.3f}", p.level_db) : "");
      }
      if (!out) throw std::runtime_error(fmt::format("write failed: {}", csv.string()));
    }
    spdlog::info("simulate-ir: {} paths, {:.3f} s IR written to {}", paths.size(), ir.buffer().duration_seconds(),
                 wav.string());
    return 0;
  }

 private:
  fs::path room_;
  fs::path output_ = "ir.wav";
  fs::path analysis_;
  fs::path envelope_;
  double frame_ms_ = 5.0;
  int sample_rate_ = 16000;
  TraceFlags trace_;
};

// ------------------------------------------------------------------ optimize

int fit_and_report(const geo::Scene& scene, const dsp::BandProfile& targets, const TraceFlags& trace,
                   const OptFlags& opt_flags, std::uint64_t seed, const fs::path& room_out, const fs::path& report_out,
                   const fs::path& trace_out, json extra) {
  const auto paths = bench::trace_scene(scene, trace.resolve(seed));
  const opt::AllBandsResult fit =
      opt::optimize_all_bands(paths, scene.room.num_materials(), targets, opt_flags.resolve(trace.air_model()));
  const geo::Scene fitted = with_fitted_materials(scene, fit);
  geo::save_scene(room_out, fitted);
  json report = optimization_report(fit, scene.room);
  report["requested_t60_s"] = bench::profile_json(targets);
  report["paths"] = paths.size();
  for (auto& [k, v] : extra.items()) report[k] = v;
  write_json_file(report_out, report);
  if (!trace_out.empty()) write_trace_csv(trace_out, fit);

  for (std::size_t b = 0; b < fit.bands.size(); ++b) {
    const auto& bo = fit.bands[b];
    if (!bo.ok) {
      spdlog::error("band {} Hz: {}", dsp::BandSet::t60().center(b), bo.error);
    } else if (!bo.result.converged) {
      spdlog::warn("band {} Hz: target {:.3f} s not reached (envelope {:.3f} s)", dsp::BandSet::t60().center(b),
                   bo.target_t60, bo.envelope_t60);
    }
  }
  spdlog::info("fitted room written to {}, report to {}", room_out.string(), report_out.string());
  return fit.all_ok() ? 0 : 1;
}

class Optimize final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("optimize", "Fit per-band material reflectivities to target T60s");
    app_->add_option("room", room_, "Room JSON")->required()->check(CLI::ExistingFile);
    auto* t = app_->add_option("--targets", targets_, "Target T60 JSON (array of 7, or a band profile)")
                  ->check(CLI::ExistingFile);
    auto* f = app_->add_option("--from-ir", from_ir_, "Measure the targets from this IR WAV")->check(CLI::ExistingFile);
    t->excludes(f);
    f->excludes(t);
    app_->add_option("-o,--output", output_, "Fitted room JSON")->capture_default_str();
    app_->add_option("--report", report_, "Convergence report JSON")->capture_default_str();
    app_->add_option("--trace", trace_csv_, "Per-iteration objective CSV");
    trace_.add_to(*app_);
    opt_.add_to(*app_);
  }

  [[nodiscard]] json config() const override {
    return {{"room", room_.string()},       {"targets", targets_.string()}, {"from_ir", from_ir_.string()},
            {"output", output_.string()},   {"report", report_.string()},   {"trace_csv", trace_csv_.string()},
            {"trace", trace_.to_json()},    {"opt", opt_.to_json()}};
  }

  int run() override {
    if (targets_.empty() && from_ir_.empty()) throw CLI::RequiredError("--targets or --from-ir");
    const geo::Scene scene = geo::load_scene(room_);
    const dsp::BandProfile targets =
        from_ir_.empty() ? bench::profile_from_json(read_json_file(targets_), dsp::BandSet::t60(), "t60_s")
                         : measured_t60(analysis::ImpulseResponse(dsp::read_wav(from_ir_)));
    return fit_and_report(scene, targets, trace_, opt_, global_.seed, output_path(output_), output_path(report_),
                          trace_csv_.empty() ? fs::path() : output_path(trace_csv_), json::object());
  }

 private:
  fs::path room_, targets_, from_ir_;
  fs::path output_ = "room_fitted.json";
  fs::path report_ = "optimize_report.json";
  fs::path trace_csv_;
  TraceFlags trace_;
  OptFlags opt_;
};

// --------------------------------------------------------------------- sweep

class Sweep final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("sweep", "Optimize to a range of uniform T60 targets and re-measure");
    app_->add_option("room", room_, "Room JSON")->required()->check(CLI::ExistingFile);
    app_->add_option("--lo", options_.t60_lo, "Lowest target (s)")->check(CLI::PositiveNumber)->capture_default_str();
    app_->add_option("--hi", options_.t60_hi, "Highest target (s)")->check(CLI::PositiveNumber)->capture_default_str();
    app_->add_option("--steps", options_.steps, "Number of targets")->check(CLI::PositiveNumber)->capture_default_str();
    app_->add_option("--realizations", options_.realizations, "Synthesis seeds averaged per target")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app_->add_option("--fs", options_.sample_rate, "Synthesis sample rate")
        ->check(CLI::Range(synth::kMinSynthesisRate, 192000))
        ->capture_default_str();
    app_->add_option("-o,--output", output_, "CSV of target vs measured T60")->capture_default_str();
    trace_.add_to(*app_);
    opt_.add_to(*app_);
  }

  [[nodiscard]] json config() const override {
    return {{"room", room_.string()},
            {"lo", options_.t60_lo},
            {"hi", options_.t60_hi},
            {"steps", options_.steps},
            {"realizations", options_.realizations},
            {"fs", options_.sample_rate},
            {"output", output_.string()},
            {"trace", trace_.to_json()},
            {"opt", opt_.to_json()}};
  }

  int run() override {
    const geo::Scene scene = geo::load_scene(room_);
    bench::SweepOptions o = options_;
    o.trace = trace_.resolve(global_.seed);
    o.opt = opt_.resolve(trace_.air_model());
    const bench::SweepResult result = bench::run_sweep(scene, o);
    const fs::path csv = output_path(output_);
    std::ofstream out(csv);
    bench::write_sweep_csv(out, result);
    if (!out) throw std::runtime_error(fmt::format("write failed: {}", csv.string()));
    spdlog::info("sweep: max deviation {:.1f}% ({} targets failed), CSV at {}", 100.0 * result.max_rel_dev(),
                 result.failures(), csv.string());
    return result.failures() == 0 ? 0 : 1;
  }

 private:
  fs::path room_;
  fs::path output_ = "sweep.csv";
  bench::SweepOptions options_;
  TraceFlags trace_;
  OptFlags opt_;
};

// --------------------------------------------------------------------- match

class Match final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("match", "Calibrate a room to a reference and render through it");
    app_->add_option("room", room_, "Room JSON")->required()->check(CLI::ExistingFile);
    auto* r = app_->add_option("--reference-ir", reference_ir_, "Reference IR WAV")->check(CLI::ExistingFile);
    auto* t = app_->add_option("--targets", targets_, "Reference JSON with t60_s and optional eq_db profiles")
                  ->check(CLI::ExistingFile);
    r->excludes(t);
    t->excludes(r);
    app_->add_option("--dry", dry_, "Dry WAV to render")->check(CLI::ExistingFile);
    app_->add_option("-o,--output", output_, "Wet WAV (written when --dry is given)")->capture_default_str();
    app_->add_option("--report", report_, "Match report JSON")->capture_default_str();
    app_->add_option("--ir", ir_out_, "Write the matched IR here");
    app_->add_option("--fitted-room", room_out_, "Write the fitted room JSON here");
    app_->add_option("--fs", sample_rate_, "Synthesis rate when matching to targets JSON")
        ->check(CLI::Range(synth::kMinSynthesisRate, 192000))
        ->capture_default_str();
    app_->add_option("--wet-gain", options_.wet_gain, "Gain on the convolved signal")->capture_default_str();
    app_->add_option("--dry-gain", options_.dry_gain, "Gain on the dry signal")->capture_default_str();
    trace_.add_to(*app_);
    opt_.add_to(*app_);
  }

  [[nodiscard]] json config() const override {
    return {{"room", room_.string()},     {"reference_ir", reference_ir_.string()}, {"targets", targets_.string()},
            {"dry", dry_.string()},       {"output", output_.string()},             {"report", report_.string()},
            {"ir", ir_out_.string()},     {"fitted_room", room_out_.string()},      {"fs", sample_rate_},
            {"wet_gain", options_.wet_gain}, {"dry_gain", options_.dry_gain},       {"trace", trace_.to_json()},
            {"opt", opt_.to_json()}};
  }

  int run() override {
    if (reference_ir_.empty() && targets_.empty()) throw CLI::RequiredError("--reference-ir or --targets");
    const geo::Scene scene = geo::load_scene(room_);
    bench::MatchReference ref;
    bench::MatchOptions o = options_;
    o.trace = trace_.resolve(global_.seed);
    o.opt = opt_.resolve(trace_.air_model());
    o.synthesis.seed = global_.seed;
    o.synthesis.sample_rate = sample_rate_;
    if (!reference_ir_.empty()) {
      ref.ir = analysis::ImpulseResponse(dsp::read_wav(reference_ir_));
      o.synthesis.sample_rate = ref.ir->sample_rate();
    } else {
      const json j = read_json_file(targets_);
      ref.t60 = bench::profile_from_json(j, dsp::BandSet::t60(), "t60_s");
      if (j.is_object() && j.contains("eq_db")) ref.eq = bench::profile_from_json(j["eq_db"], dsp::BandSet::eq());
    }
    std::optional<dsp::AudioBuffer> dry;
    if (!dry_.empty()) {
      dry = dsp::read_wav(dry_);
      if (dry->sample_rate() != o.synthesis.sample_rate) {
        spdlog::info("match: resampling dry audio {} Hz -> {} Hz", dry->sample_rate(), o.synthesis.sample_rate);
        dry = dsp::resample(*dry, o.synthesis.sample_rate);
      }
    }

    const bench::MatchResult res = bench::run_match(scene, ref, dry ? &*dry : nullptr, o);
    json report = res.report.to_json();
    if (res.wet) {
      const fs::path wav = output_path(output_);
      dsp::write_wav(wav, *res.wet);
      report["wet"] = wav.string();
    }
    if (!ir_out_.empty()) dsp::write_wav(output_path(ir_out_), res.ir.buffer());
    if (!room_out_.empty()) {
      geo::Scene fitted = scene;
      for (std::size_t m = 0; m < res.materials.size(); ++m) fitted.room.set_reflectivity(m, res.materials[m].reflectivity);
      geo::save_scene(output_path(room_out_), fitted);
    }
    write_json_file(output_path(report_), report);
    spdlog::info("match: T60 error {:.3f} s, EQ error {}", res.report.t60_error,
                 res.report.eq_error ? fmt::format("{:.2f} dB", *res.report.eq_error) : std::string("n/a"));
    const bool all_bands = std::all_of(res.report.bands.begin(), res.report.bands.end(),
                                       [](const opt::BandOptimization& b) { return b.ok; });
    return all_bands ? 0 : 1;
  }

 private:
  fs::path room_, reference_ir_, targets_, dry_;
  fs::path output_ = "wet.wav";
  fs::path report_ = "match_report.json";
  fs::path ir_out_, room_out_;
  int sample_rate_ = 16000;
  bench::MatchOptions options_;
  TraceFlags trace_;
  OptFlags opt_;
};

// -------------------------------------------------------------------- render

synth::EqFilterSpec eq_spec_from_json(const json& j) {
  synth::EqFilterSpec spec;
  if (j.is_object() && j.contains("gains_db")) {
    spec.gains_db = j["gains_db"].get<std::vector<double>>();
    spec.delay_ms = j.value("delay_ms", spec.delay_ms);
    spec.highband_floor_db = j.value("highband_floor_db", spec.highband_floor_db);
  } else if (j.is_object() && j.contains("eq_filter_gains_db")) {
    spec.gains_db = j["eq_filter_gains_db"].get<std::vector<double>>();
  } else {
    const dsp::BandProfile p = bench::profile_from_json(j, dsp::BandSet::eq(), "eq_db");
    for (std::size_t b = 0; b < p.size(); ++b) spec.gains_db[b] = p.valid(b) ? p.value(b) : 0.0;
  }
  spec.validate();
  return spec;
}

json eq_spec_json(const synth::EqFilterSpec& spec) {
  return {{"bands_hz", dsp::BandSet::eq().centers()},
          {"gains_db", spec.gains_db},
          {"delay_ms", spec.delay_ms},
          {"highband_floor_db", spec.highband_floor_db}};
}

class Render final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("render", "Convolve dry audio with a room's simulated, equalized IR");
    app_->add_option("room", room_, "Room JSON")->required()->check(CLI::ExistingFile);
    app_->add_option("dry", dry_, "Dry WAV")->required()->check(CLI::ExistingFile);
    app_->add_option("--eq", eq_, "EQ JSON: {\"gains_db\": [6 values]}, a band profile, or a match report")
        ->check(CLI::ExistingFile);
    app_->add_option("-o,--output", output_, "Wet WAV")->capture_default_str();
    app_->add_option("--ir", ir_out_, "Write the IR used for rendering here");
    app_->add_option("--wet-gain", wet_gain_, "Gain on the convolved signal")->capture_default_str();
    app_->add_option("--dry-gain", dry_gain_, "Gain on the dry signal")->capture_default_str();
    trace_.add_to(*app_);
  }

  [[nodiscard]] json config() const override {
    return {{"room", room_.string()},      {"dry", dry_.string()},   {"eq", eq_.string()},
            {"output", output_.string()},  {"ir", ir_out_.string()}, {"wet_gain", wet_gain_},
            {"dry_gain", dry_gain_},       {"trace", trace_.to_json()}};
  }

  int run() override {
    const geo::Scene scene = geo::load_scene(room_);
    const dsp::AudioBuffer dry = dsp::read_wav(dry_);
    analysis::ImpulseResponse ir = simulate(scene, trace_, global_.seed, dry.sample_rate());
    if (!eq_.empty()) ir = synth::apply_eq(ir, eq_spec_from_json(read_json_file(eq_)));
    const synth::RenderResult wet = synth::render(dry, ir, wet_gain_, dry_gain_);
    const fs::path wav = output_path(output_);
    dsp::write_wav(wav, wet.audio);
    if (!ir_out_.empty()) dsp::write_wav(output_path(ir_out_), ir.buffer());
    if (wet.normalization != 1.0) spdlog::info("render: peak normalized by {:.4f}", wet.normalization);
    spdlog::info("render: {:.2f} s written to {}", wet.audio.duration_seconds(), wav.string());
    return 0;
  }

 private:
  fs::path room_, dry_, eq_;
  fs::path output_ = "wet.wav";
  fs::path ir_out_;
  double wet_gain_ = 1.0;
  double dry_gain_ = 0.0;
  TraceFlags trace_;
};

// ------------------------------------------------------------------- dataset

class Dataset final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("dataset", "Build log-Mel feature tensors and a split manifest");
    app_->add_option("--speech", speech_, "Directory of speech WAVs named <speaker>_<anything>.wav")
        ->check(CLI::ExistingDirectory);
    app_->add_option("--synth-speakers", synth_speakers_, "Synthesize this many speakers when --speech is absent")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app_->add_option("--synth-minutes", synth_minutes_, "Minutes of synthetic speech per speaker")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app_->add_option("--irs", irs_, "Directory of IR WAVs")->check(CLI::ExistingDirectory);
    app_->add_option("--synth-irs", synth_irs_, "Generate this many exponential-decay IRs when --irs is absent")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app_->add_option("--noise", noise_, "Directory of noise WAVs (white noise otherwise)")->check(CLI::ExistingDirectory);
    app_->add_option("--counts", counts_, "Examples for train, val and test")->expected(3)->capture_default_str();
    app_->add_option("--snr-lo", options_.snr_lo_db, "Lowest injected SNR (dB)")->capture_default_str();
    app_->add_option("--snr-hi", options_.snr_hi_db, "Highest injected SNR (dB)")->capture_default_str();
    app_->add_flag("--noiseless", options_.noiseless, "Do not inject noise");
    app_->add_option("-o,--output", output_, "Dataset directory")->capture_default_str();
  }

  [[nodiscard]] json config() const override {
    return {{"speech", speech_.string()},      {"synth_speakers", synth_speakers_}, {"synth_minutes", synth_minutes_},
            {"irs", irs_.string()},            {"synth_irs", synth_irs_},           {"noise", noise_.string()},
            {"counts", counts_},               {"snr_lo", options_.snr_lo_db},      {"snr_hi", options_.snr_hi_db},
            {"noiseless", options_.noiseless}, {"output", output_.string()}};
  }

  int run() override {
    dataset::DatasetOptions o = options_;
    o.seed = global_.seed;
    std::copy(counts_.begin(), counts_.end(), o.counts.begin());
    const auto speech = speech_.empty()
                            ? dataset::synth_speech_corpus(synth_speakers_, synth_minutes_, global_.seed)
                            : dataset::load_speech_corpus(speech_);
    const auto irs = irs_.empty() ? synthetic_irs() : dataset::load_ir_corpus(irs_);
    const auto noise = noise_.empty() ? std::vector<dataset::NoiseSource>{} : dataset::load_noise_corpus(noise_);
    const fs::path dir = output_path(output_ / "manifest.json").parent_path();
    const dataset::DatasetManifest m = dataset::build_dataset(speech, irs, noise, o, dir);
    std::size_t expected = 0;
    for (std::size_t c : o.counts) expected += c;
    spdlog::info("dataset: {} of {} examples, manifest at {}", m.examples.size(), expected,
                 (dir / "manifest.json").string());
    return m.examples.size() == expected ? 0 : 1;
  }

 private:
  [[nodiscard]] std::vector<dataset::IrSource> synthetic_irs() const {
    std::mt19937_64 rng(global_.seed ^ 0x5851f42d4c957f2dULL);
    std::vector<dataset::IrSource> out;
    for (std::size_t i = 0; i < synth_irs_; ++i) {
      augment::SyntheticIrSpec s;
      const double base = std::uniform_real_distribution<double>(0.2, 1.4)(rng);
      for (std::size_t b = 0; b < dsp::kNumT60Bands; ++b) {
        // Shorter decays towards the top octaves, as air absorption would give.
        s.t60_s.push_back(base * (1.0 - 0.06 * static_cast<double>(b)) *
                          std::uniform_real_distribution<double>(0.85, 1.15)(rng));
        s.band_gain_db.push_back(std::normal_distribution<double>(0.0, 3.0)(rng));
      }
      s.duration_s = std::max(1.0, 1.5 * base);
      s.drr_db = std::uniform_real_distribution<double>(-3.0, 9.0)(rng);
      s.seed = global_.seed + i;
      out.push_back({fmt::format("synth_ir{:03}", i), augment::make_exponential_ir(s)});
    }
    return out;
  }

  fs::path speech_, irs_, noise_;
  std::size_t synth_speakers_ = 12;
  double synth_minutes_ = 1.0;
  std::size_t synth_irs_ = 24;
  std::vector<std::size_t> counts_{2000, 400, 400};
  dataset::DatasetOptions options_;
  fs::path output_ = "dataset";
};

// --------------------------------------------------------------------- bench

class Bench final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("bench", "Run the acceptance criteria");
    std::string keys;
    for (const auto& k : bench::criterion_keys()) keys += (keys.empty() ? "" : ", ") + k;
    app_->add_option("--filter", options_.filter, "Comma-separated criterion numbers or names (" + keys + ")");
    app_->add_option("--json", json_out_, "Machine-readable report")->capture_default_str();
    app_->add_option("--items-per-bin", options_.augment_items_per_bin, "Augmented IRs per T60 bin")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app_->add_flag("--no-extended", no_extended_, "Skip the informative long-T60 sweep points");
  }

  [[nodiscard]] json config() const override {
    return {{"filter", options_.filter},
            {"json", json_out_.string()},
            {"items_per_bin", options_.augment_items_per_bin},
            {"extended_sweep", !no_extended_}};
  }

  int run() override {
    bench::AcceptanceOptions o = options_;
    o.seed = global_.seed;
    o.extended_sweep = !no_extended_;
    const auto results = bench::run_acceptance(o, [](const bench::CriterionResult& r) {
      std::cout << fmt::format("[{}] {} {}: {} ({:.1f} s)", r.passed ? "PASS" : "FAIL", r.id, r.key, r.summary,
                               r.seconds)
                << std::endl;
    });
    if (results.empty()) throw std::invalid_argument(fmt::format("--filter '{}' selects no criterion", o.filter));
    const json report = bench::acceptance_json(results);
    write_json_file(output_path(json_out_), report);
    return report["passed"].get<bool>() ? 0 : 1;
  }

 private:
  bench::AcceptanceOptions options_;
  fs::path json_out_ = "bench_report.json";
  bool no_extended_ = false;
};

// --------------------------------------------------------- predictions-apply

class PredictionsApply final : public Command {
 public:
  using Command::Command;

  void add_to(CLI::App& parent) override {
    app_ = parent.add_subcommand("predictions-apply", "Use estimator predictions as T60 targets or EQ targets");
    app_->add_option("predictions", predictions_, "Predictions JSON")->required()->check(CLI::ExistingFile);
    app_->add_option("room", room_, "Room JSON")->required()->check(CLI::ExistingFile);
    app_->add_option("--head", head_, "Which predictions to apply (default: every head present)")
        ->check(CLI::IsMember({"t60", "eq"}));
    app_->add_option("-o,--output", output_, "Fitted room JSON (T60 head)")->capture_default_str();
    app_->add_option("--report", report_, "Report JSON")->capture_default_str();
    app_->add_option("--eq-output", eq_out_, "EQ filter JSON for `render --eq` (EQ head)")->capture_default_str();
    app_->add_option("--fs", sample_rate_, "Rate of the IR simulated for the EQ delta")
        ->check(CLI::Range(synth::kMinSynthesisRate, 192000))
        ->capture_default_str();
    trace_.add_to(*app_);
    opt_.add_to(*app_);
  }

  [[nodiscard]] json config() const override {
    return {{"predictions", predictions_.string()}, {"room", room_.string()},      {"head", head_},
            {"output", output_.string()},           {"report", report_.string()},  {"eq_output", eq_out_.string()},
            {"fs", sample_rate_},                   {"trace", trace_.to_json()},   {"opt", opt_.to_json()}};
  }

  int run() override {
    const auto records = bench::read_predictions(predictions_);
    const geo::Scene scene = geo::load_scene(room_);
    const auto t60 = head_ != "eq" ? bench::aggregate_predictions(records, "t60") : std::nullopt;
    const auto eq = head_ != "t60" ? bench::aggregate_predictions(records, "eq") : std::nullopt;
    if (!t60 && !eq) {
      throw std::invalid_argument(fmt::format("{}: no {} predictions", predictions_.string(),
                                              head_.empty() ? std::string("t60 or eq") : head_));
    }
    json meta = {{"records", records.size()}, {"predictions", predictions_.string()}};
    int status = 0;
    if (t60) {
      status = fit_and_report(scene, *t60, trace_, opt_, global_.seed, output_path(output_), output_path(report_),
                              fs::path(), meta);
    }
    if (eq) {
      const analysis::ImpulseResponse ir = simulate(scene, trace_, global_.seed, sample_rate_);
      const synth::EqFilterSpec spec = synth::EqFilterSpec::from_delta(*eq, analysis::extract_eq(ir));
      json j = eq_spec_json(spec);
      j["target_eq_db"] = bench::profile_json(*eq);
      write_json_file(output_path(eq_out_), j);
      spdlog::info("predictions-apply: EQ filter written to {}", output_path(eq_out_).string());
    }
    return status;
  }

 private:
  fs::path predictions_, room_;
  std::string head_;
  fs::path output_ = "room_fitted.json";
  fs::path report_ = "predictions_report.json";
  fs::path eq_out_ = "eq.json";
  int sample_rate_ = 16000;
  TraceFlags trace_;
  OptFlags opt_;
};

}  // namespace

std::vector<std::unique_ptr<Command>> make_commands(const GlobalOptions& g) {
  std::vector<std::unique_ptr<Command>> cmds;
  cmds.push_back(std::make_unique<AnalyzeIr>(g));
  cmds.push_back(std::make_unique<Augment>(g));
  cmds.push_back(std::make_unique<SimulateIr>(g));
  cmds.push_back(std::make_unique<Optimize>(g));
  cmds.push_back(std::make_unique<Sweep>(g));
  cmds.push_back(std::make_unique<Match>(g));
  cmds.push_back(std::make_unique<Render>(g));
  cmds.push_back(std::make_unique<Dataset>(g));
  cmds.push_back(std::make_unique<Bench>(g));
  cmds.push_back(std::make_unique<PredictionsApply>(g));
  return cmds;
}

}  // namespace roomrelight::cli
