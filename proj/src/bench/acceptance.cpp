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

#include "roomrelight/bench/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/analysis/eq.hpp"
#include "roomrelight/augment/corpus.hpp"
#include "roomrelight/augment/synthetic.hpp"
#include "roomrelight/bench/pipeline.hpp"
#include "roomrelight/dsp/fir.hpp"
#include "roomrelight/dsp/spectrum.hpp"
#include "roomrelight/geo/energy.hpp"
#include "roomrelight/geo/image_source.hpp"
#include "roomrelight/opt/material_opt.hpp"
#include "roomrelight/opt/slope.hpp"
#include "roomrelight/synth/equalizer.hpp"

namespace roomrelight::bench {
using nlohmann::json;

namespace {

using Rng = std::mt19937_64;

CriterionResult criterion(int id, std::string key, std::string title) {
  CriterionResult r;
  r.id = id;
  r.key = std::move(key);
  r.title = std::move(title);
  return r;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<geo::MaterialCoeffs> uniform_materials(std::size_t n, double rho) {
  std::vector<geo::MaterialCoeffs> mats(n);
  for (std::size_t m = 0; m < n; ++m) {
    mats[m].name = fmt::format("m{}", m);
    mats[m].reflectivity.fill(rho);
  }
  return mats;
}

geo::Scene reference_scene() {
  return {geo::RoomModel::shoebox({4.0, 6.0, 3.0}, {0, 1, 2, 3, 4, 5}, uniform_materials(6, 0.8)),
          {1.2, 1.5, 1.4},
          {2.7, 4.1, 1.6}};
}

// A random shoebox slope problem over image-source paths.
struct RandomProblem {
  opt::OptimizationProblem problem;
  std::vector<geo::MaterialCoeffs> materials;
  Eigen::VectorXd rho;
};

RandomProblem random_problem(Rng& rng) {
  const geo::Vec3 dims{uniform(rng, 3.0, 9.0), uniform(rng, 3.0, 9.0), uniform(rng, 2.4, 4.5)};
  const auto n_mat = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 6)(rng));
  std::array<std::size_t, 6> walls{};
  for (std::size_t w = 0; w < 6; ++w) walls[w] = w < n_mat ? w : std::uniform_int_distribution<std::size_t>(0, n_mat - 1)(rng);
  RandomProblem rp;
  rp.materials = uniform_materials(n_mat, 0.8);
  const geo::RoomModel room = geo::RoomModel::shoebox(dims, walls, rp.materials);
  const auto inside = [&] {
    return geo::Vec3{uniform(rng, 0.3, dims[0] - 0.3), uniform(rng, 0.3, dims[1] - 0.3), uniform(rng, 0.3, dims[2] - 0.3)};
  };
  const geo::Vec3 src = inside();
  geo::Vec3 lst = inside();
  while ((lst - src).norm() < 0.5) lst = inside();
  const std::vector<geo::PathRecord> paths = geo::trace_image_source(room, src, lst, 10);
  const auto band = std::uniform_int_distribution<std::size_t>(0, 6)(rng);
  rp.problem = opt::make_problem(paths, n_mat, band, uniform(rng, 0.3, 1.5), geo::AirModel::standard().gamma[band]);
  rp.rho.resize(static_cast<Eigen::Index>(n_mat));
  for (Eigen::Index j = 0; j < rp.rho.size(); ++j) rp.rho[j] = uniform(rng, 0.1, 0.95);
  return rp;
}

// Slope of the dB path energies by the textbook normal equations in
// extended precision; the finite-difference oracle for the gradient.
long double reference_slope(const opt::OptimizationProblem& p, const Eigen::VectorXd& rho) {
  long double st = 0, sy = 0, stt = 0, sty = 0;
  for (const auto& path : p.paths) {
    long double e = static_cast<long double>(path.weight) * std::exp(-static_cast<long double>(p.gamma) * path.distance) /
                    (4.0L * 3.14159265358979323846264338327950288L * path.distance * path.distance);
    for (std::size_t m = 0; m < path.bounce_counts.size(); ++m) {
      e *= std::pow(static_cast<long double>(rho[static_cast<Eigen::Index>(m)]), path.bounce_counts[m]);
    }
    const long double t = path.arrival_time;
    const long double y = 10.0L * std::log10(e);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const auto n = static_cast<long double>(p.paths.size());
  return (n * sty - st * sy) / (n * stt - st * st);
}

long double reference_objective(const opt::OptimizationProblem& p, const Eigen::VectorXd& rho) {
  const long double d = reference_slope(p, rho) + 60.0L / p.target_t60;
  return d * d;
}

CriterionResult gradient_check(const AcceptanceOptions& o) {
  CriterionResult r = criterion(1, "gradient", "analytic gradient matches central finite differences");
  Rng rng(o.seed + 101);
  const int n_problems = 120;
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < n_problems; ++i) {
    const RandomProblem rp = random_problem(rng);
    const Eigen::VectorXd g = opt::gradient(rp.problem, rp.rho);
    for (Eigen::Index j = 0; j < rp.rho.size(); ++j) {
      Eigen::VectorXd up = rp.rho, dn = rp.rho;
      up[j] += h;
      dn[j] -= h;
      const auto fd = static_cast<double>((reference_objective(rp.problem, up) - reference_objective(rp.problem, dn)) / (2 * h));
      worst = std::max(worst, std::abs(g[j] - fd) / (1.0 + std::abs(g[j])));
    }
  }
  r.passed = worst < 1e-5;
  r.summary = fmt::format("{} problems, max relative error {:.2e} (limit 1e-5)", n_problems, worst);
  r.metrics = {{"problems", n_problems}, {"max_relative_error", worst}, {"step", h}};
  return r;
}

CriterionResult slope_check(const AcceptanceOptions& o) {
  CriterionResult r = criterion(2, "slope", "best-fit slope ignores a constant energy scale");
  Rng rng(o.seed + 202);
  const double scales[] = {1e-9, 1e-3, 0.37, 42.0, 1e6};
  double worst = 0.0;
  int cases = 0;
  for (int i = 0; i < 25; ++i) {
    const RandomProblem rp = random_problem(rng);
    std::vector<geo::MaterialCoeffs> mats = rp.materials;
    for (std::size_t m = 0; m < mats.size(); ++m) mats[m].reflectivity.fill(rp.rho[static_cast<Eigen::Index>(m)]);
    geo::AirModel air = geo::AirModel::none();
    air.gamma.fill(rp.problem.gamma);
    const double base = opt::slope_of_fit(rp.problem.paths, mats, rp.problem.band, air);
    const double base_c = opt::BandSlope(rp.problem.paths, mats.size(), rp.problem.gamma).slope(rp.rho);
    for (double c : scales) {
      std::vector<geo::PathRecord> scaled = rp.problem.paths;
      for (auto& p : scaled) p.weight *= c;
      worst = std::max(worst, std::abs(opt::slope_of_fit(scaled, mats, rp.problem.band, air) - base));
      worst = std::max(worst, std::abs(opt::BandSlope(scaled, mats.size(), rp.problem.gamma).slope(rp.rho) - base_c));
      ++cases;
    }
  }
  r.passed = worst <= 1e-9;
  r.summary = fmt::format("{} scaled cases, max slope change {:.2e} dB/s (limit 1e-9)", cases, worst);
  r.metrics = {{"cases", cases}, {"max_abs_change", worst}};
  return r;
}

json sweep_rows_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& row : s.rows) {
    json jr = {{"target", row.target}};
    if (row.measured) {
      jr["measured"] = profile_json(row.measured->t60);
      jr["single"] = profile_json(row.measured->first);
      jr["spread"] = row.measured->spread;
    } else {
      jr["error"] = row.error;
    }
    rows.push_back(jr);
  }
  return rows;
}

CriterionResult sweep_check(const AcceptanceOptions& o) {
  CriterionResult r = criterion(3, "sweep", "T60 sweep 0.2-1.5 s re-measured within 10%");
  SweepOptions so;
  so.trace.seed = o.seed + 7;
  const geo::Scene scene = reference_scene();
  const SweepResult gated = run_sweep(scene, so);
  const double dev = gated.max_rel_dev();
  r.passed = gated.failures() == 0 && dev <= 0.10;
  r.summary = fmt::format("10 targets, max deviation {:.1f}% of target (single realization {:.1f}%), {} failed",
                          100 * dev, 100 * gated.max_single_rel_dev(), gated.failures());
  r.metrics = {{"max_rel_dev", dev}, {"max_single_rel_dev", gated.max_single_rel_dev()},
               {"realizations", so.realizations}, {"rows", sweep_rows_json(gated)}};
  if (o.extended_sweep) {
    SweepOptions ext = so;
    ext.t60_lo = 1.5 + 1.0 / 3.0;
    ext.t60_hi = 2.5;
    ext.steps = 3;
    const SweepResult extended = run_sweep(scene, ext);
    r.metrics["extended"] = {{"max_rel_dev", extended.max_rel_dev()}, {"rows", sweep_rows_json(extended)}};
    r.summary += fmt::format("; informative 1.8-2.5 s: {:.1f}%", 100 * extended.max_rel_dev());
  }
  return r;
}

CriterionResult analyzer_check(const AcceptanceOptions& o) {
  CriterionResult r = criterion(4, "analyzer", "T60 of synthetic exponential IRs recovered within 5%");
  const int seeds = 64;
  const dsp::BandSet& bands = dsp::BandSet::t60();
  double worst = 0.0, worst_single_std = 0.0;
  json per = json::array();
  for (double t60 : {0.2, 0.5, 1.0, 1.5}) {
    std::vector<double> slope_sum(bands.size(), 0.0), t_sum(bands.size(), 0.0), t_sq(bands.size(), 0.0);
    std::vector<int> count(bands.size(), 0);
    for (int s = 0; s < seeds; ++s) {
      const analysis::ImpulseResponse ir =
          augment::make_exponential_ir(t60, std::max(2.0, 2.0 * t60), 16000, o.seed * 1000 + static_cast<std::uint64_t>(s));
      const auto fits = analysis::analyze_decay(ir, bands);
      for (std::size_t b = 0; b < bands.size(); ++b) {
        if (!fits[b].valid) continue;
        slope_sum[b] += fits[b].slope_db_per_s;
        t_sum[b] += fits[b].t60;
        t_sq[b] += fits[b].t60 * fits[b].t60;
        ++count[b];
      }
    }
    json row = {{"t60", t60}, {"bands", json::array()}};
    for (std::size_t b = 0; b < bands.size(); ++b) {
      const bool reliable = 2 * count[b] >= seeds;
      json jb = {{"band_hz", bands.center(b)}, {"reliable", reliable}, {"valid_fits", count[b]}};
      if (reliable) {
        const double est = -60.0 / (slope_sum[b] / count[b]);
        const double mean = t_sum[b] / count[b];
        const double sd = std::sqrt(std::max(0.0, t_sq[b] / count[b] - mean * mean)) / t60;
        worst = std::max(worst, std::abs(est / t60 - 1.0));
        worst_single_std = std::max(worst_single_std, sd);
        jb["estimate"] = est;
        jb["single_rel_std"] = sd;
      }
      row["bands"].push_back(jb);
    }
    per.push_back(row);
  }
  r.passed = worst <= 0.05;
  r.summary = fmt::format("{} IRs per T60, max deviation {:.1f}% (single-IR spread up to {:.1f}%)", seeds,
                          100 * worst, 100 * worst_single_std);
  r.metrics = {{"max_rel_dev", worst}, {"max_single_rel_std", worst_single_std}, {"per_t60", per}};
  return r;
}

CriterionResult eq_check(const AcceptanceOptions& o) {
  CriterionResult r = criterion(5, "eq", "EQ filter round-trip, 32 ms delay, high-band floor");
  Rng rng(o.seed + 505);
  const int fs = 16000;
  const dsp::BandSet& eq = dsp::BandSet::eq();
  const std::size_t taps = synth::EqFilterSpec{}.taps(fs);

  double worst_gain = 0.0;
  const int n_vectors = 50;
  for (int i = 0; i < n_vectors; ++i) {
    std::vector<double> gains(eq.size());
    for (double& g : gains) g = uniform(rng, -12.0, 12.0);
    const dsp::FirFilter fir = dsp::design_fir_gains(dsp::BandProfile(eq, gains), taps, fs);
    const dsp::BandProfile got = analysis::extract_eq(analysis::ImpulseResponse(fir.as_buffer(), fir.delay_samples));
    for (std::size_t b = 0; b < eq.size(); ++b) worst_gain = std::max(worst_gain, std::abs(got.value(b) - gains[b]));
  }

  const analysis::ImpulseResponse probe = augment::make_exponential_ir(0.5, 1.0, fs, o.seed + 55);
  const analysis::ImpulseResponse identity = synth::apply_eq(probe, synth::EqFilterSpec{});
  const auto x = probe.samples();
  const auto y = identity.samples();
  std::size_t best_lag = 0;
  double best = -1.0;
  for (std::size_t lag = 0; lag < 2048; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i < x.size() && i + lag < y.size(); ++i) c += x[i] * y[i + lag];
    if (c > best) {
      best = c;
      best_lag = lag;
    }
  }
  const double delay_ms = 1000.0 * static_cast<double>(best_lag) / fs;

  const std::array<double, 1> top{8000.0};
  const double in_db = dsp::octave_band_levels_db(x, fs, top)[0];
  double least_atten = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    synth::EqFilterSpec spec;
    for (double& g : spec.gains_db) g = uniform(rng, -12.0, 12.0);
    const analysis::ImpulseResponse out = synth::apply_eq(probe, spec);
    least_atten = std::min(least_atten, in_db - dsp::octave_band_levels_db(out.samples(), fs, top)[0]);
  }

  const bool gains_ok = worst_gain <= 1.5;
  const bool delay_ok = best_lag * 1000 == static_cast<std::size_t>(32 * fs);
  const bool floor_ok = least_atten >= 40.0;
  r.passed = gains_ok && delay_ok && floor_ok;
  r.summary = fmt::format("max band error {:.2f} dB over {} vectors, delay {:.3f} ms, 8 kHz attenuation >= {:.1f} dB",
                          worst_gain, n_vectors, delay_ms, least_atten);
  r.metrics = {{"max_band_error_db", worst_gain}, {"delay_ms", delay_ms}, {"delay_samples", best_lag},
               {"min_8k_attenuation_db", least_atten}, {"taps", taps}};
  return r;
}

CriterionResult sabine_check(const AcceptanceOptions& o) {
  CriterionResult r = criterion(6, "sabine", "traced decay agrees with Sabine within 25%");
  const geo::Vec3 dims{4.0, 6.0, 3.0};
  double worst = 0.0;
  json rows = json::array();
  for (double a : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const auto mats = uniform_materials(1, 1.0 - a);
    const geo::Scene scene{geo::RoomModel::shoebox(dims, {0, 0, 0, 0, 0, 0}, mats), {1.2, 1.5, 1.35}, {2.8, 4.2, 1.5}};
    TraceSettings ts;
    ts.seed = o.seed + 3;
    const auto paths = trace_scene(scene, ts);
    const std::vector<double> rho{1.0 - a};
    const analysis::DecayFit env = opt::envelope_decay(paths, rho, 0.0);
    const double sabine = geo::sabine_t60(scene.room, 3);
    const double dev = env.valid ? env.t60 / sabine - 1.0 : std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(dev));
    rows.push_back({{"absorption", a}, {"sabine", sabine}, {"traced", env.valid ? json(env.t60) : json(nullptr)}, {"rel_dev", dev}});
  }
  r.passed = worst <= 0.25;
  r.summary = fmt::format("absorption 0.1-0.5, max deviation {:.1f}% (limit 25%)", 100 * worst);
  r.metrics = {{"max_rel_dev", worst}, {"rows", rows}};
  return r;
}

CriterionResult augmentation_check(const AcceptanceOptions& o) {
  CriterionResult r = criterion(7, "augmentation", "augmented corpus balanced, honestly labelled, wider EQ");
  Rng rng(o.seed + 707);
  std::vector<analysis::ImpulseResponse> sources;
  for (int i = 0; i < 16; ++i) {
    augment::SyntheticIrSpec s;
    s.t60_s.assign(dsp::kNumT60Bands, uniform(rng, 0.3, 1.0));
    s.band_gain_db.resize(dsp::kNumT60Bands);
    for (double& g : s.band_gain_db) g = std::normal_distribution<double>(0.0, 3.0)(rng);
    s.duration_s = 2.5;
    s.seed = o.seed * 1000 + 100 + static_cast<std::uint64_t>(i);
    sources.push_back(augment::make_exponential_ir(s));
  }
  augment::AugmentationSpec spec;
  spec.eq_model = augment::fit_eq_distribution(sources);
  spec.count = static_cast<std::size_t>(spec.t60_grid) * o.augment_items_per_bin;
  spec.seed = o.seed;
  const auto items = augment::build_augmented_corpus(sources, spec);

  const auto hist = augment::t60_histogram(items, spec);
  const auto [lo_it, hi_it] = std::minmax_element(hist.begin(), hist.end());
  const double ratio = *lo_it > 0 ? static_cast<double>(*hi_it) / static_cast<double>(*lo_it)
                                  : std::numeric_limits<double>::infinity();
  double worst_t60 = 0.0, worst_eq = 0.0;
  std::vector<analysis::ImpulseResponse> irs;
  for (const auto& e : items) {
    worst_t60 = std::max(worst_t60, std::abs(e.t60_fullband / e.target_t60 - 1.0));
    for (std::size_t b = 0; b < e.eq.size(); ++b) {
      if (e.eq.valid(b)) worst_eq = std::max(worst_eq, std::abs(e.eq.value(b) - e.target_eq.value(b)));
    }
    irs.push_back(e.ir);
  }
  const augment::EqDistribution after = augment::fit_eq_distribution(irs);
  bool wider = true;
  for (std::size_t b = 0; b < after.std_db.size(); ++b) wider = wider && after.std_db[b] > spec.eq_model.std_db[b];

  const bool complete = items.size() == spec.count;
  r.passed = complete && ratio <= 1.2 && worst_t60 <= 0.10 && worst_eq <= 2.0 && wider;
  r.summary = fmt::format("{}/{} items, bin ratio {:.2f}, worst T60 error {:.1f}%, worst EQ error {:.2f} dB, EQ spread {}",
                          items.size(), spec.count, ratio, 100 * worst_t60, worst_eq, wider ? "wider in every band" : "NOT wider");
  r.metrics = {{"items", items.size()},     {"histogram", hist},
               {"bin_ratio", ratio},        {"max_t60_rel_error", worst_t60},
               {"max_eq_error_db", worst_eq}, {"source_eq_std_db", spec.eq_model.std_db},
               {"augmented_eq_std_db", after.std_db}};
  return r;
}

CriterionResult match_check(const AcceptanceOptions& o) {
  CriterionResult r = criterion(8, "match", "self-synthesized reference matched");
  Rng rng(o.seed + 808);
  double worst_t60 = 0.0, worst_eq = 0.0;
  json cases = json::array();
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<geo::MaterialCoeffs> mats = uniform_materials(6, 0.8);
    for (auto& m : mats) {
      const double base = uniform(rng, 0.55, 0.95);
      for (std::size_t b = 0; b < dsp::kNumT60Bands; ++b) {
        m.reflectivity[b] = std::min(0.98, base * (1.0 - 0.04 * static_cast<double>(b) * uniform(rng, 0.0, 1.0)));
      }
    }
    const geo::Scene scene{geo::RoomModel::shoebox({5.0, 4.0, 3.0}, {0, 1, 2, 3, 4, 5}, mats), {1.3, 1.1, 1.5}, {3.6, 2.8, 1.4}};
    TraceSettings ts;
    ts.seed = o.seed + 11 + static_cast<std::uint64_t>(trial);
    synth::SynthesisOptions ref_synth;
    ref_synth.seed = o.seed + 1234;
    MatchReference ref;
    ref.ir = synth::synthesize_ir(trace_scene(scene, ts), mats, geo::AirModel::standard(), ref_synth);

    MatchOptions mo;
    mo.trace.seed = o.seed + 5;
    mo.synthesis.seed = o.seed;
    const MatchResult res = run_match(scene, ref, nullptr, mo);
    worst_t60 = std::max(worst_t60, res.report.t60_error);
    worst_eq = std::max(worst_eq, res.report.eq_error.value_or(std::numeric_limits<double>::infinity()));
    cases.push_back({{"t60_error_s", res.report.t60_error}, {"eq_error_db", res.report.eq_error.value_or(-1.0)}});
  }
  r.passed = worst_t60 <= 0.05 && worst_eq <= 1.5;
  r.summary = fmt::format("3 rooms, worst T60 error {:.3f} s (limit 0.05), worst EQ error {:.2f} dB (limit 1.5)", worst_t60,
                          worst_eq);
  r.metrics = {{"max_t60_error_s", worst_t60}, {"max_eq_error_db", worst_eq}, {"cases", cases}};
  return r;
}

using CriterionFn = CriterionResult (*)(const AcceptanceOptions&);

struct Entry {
  const char* key;
  CriterionFn fn;
};

const std::array<Entry, 8> kCriteria{{{"gradient", gradient_check},
                                      {"slope", slope_check},
                                      {"sweep", sweep_check},
                                      {"analyzer", analyzer_check},
                                      {"eq", eq_check},
                                      {"sabine", sabine_check},
                                      {"augmentation", augmentation_check},
                                      {"match", match_check}}};

}  // namespace

const std::vector<std::string>& criterion_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : kCriteria) k.emplace_back(e.key);
    return k;
  }();
  return keys;
}

bool filter_selects(const std::string& filter, int id, const std::string& key) {
  if (filter.empty()) return true;
  std::stringstream ss(filter);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    if (token.empty()) continue;
    if (token == std::to_string(id) || key.find(token) != std::string::npos) return true;
  }
  return false;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!filter_selects(options.filter, id, kCriteria[i].key)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = kCriteria[i].fn(options);
    } catch (const std::exception& e) {
      r.id = id;
      r.key = kCriteria[i].key;
      r.title = kCriteria[i].key;
      r.passed = false;
      r.summary = fmt::format("error: {}", e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

json acceptance_json(const std::vector<CriterionResult>& results) {
  json list = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    list.push_back({{"id", r.id},
                    {"key", r.key},
                    {"title", r.title},
                    {"passed", r.passed},
                    {"summary", r.summary},
                    {"seconds", r.seconds},
                    {"metrics", r.metrics}});
  }
  return {{"passed", all}, {"criteria", list}};
}

}  // namespace roomrelight::bench
