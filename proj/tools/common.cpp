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

#include "common.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::cli {
using nlohmann::json;
namespace fs = std::filesystem;

fs::path Command::output_path(const fs::path& p) const {
  const fs::path out = p.is_absolute() ? p : global_.output_dir / p;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  return out;
}

void TraceFlags::add_to(CLI::App& app) {
  app.add_option("--tracer", tracer, "Path tracer")
      ->check(CLI::IsMember({"stochastic", "image-source"}))
      ->capture_default_str();
  app.add_option("--rays", settings.n_rays, "Stochastic tracer: rays cast")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-time", settings.max_time, "Stochastic tracer: longest arrival kept (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--detector-radius", settings.detector_radius, "Stochastic tracer: listener sphere radius (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--order", settings.image_order, "Image-source tracer: maximum reflection order")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--air", air, "Air absorption model")->check(CLI::IsMember({"standard", "none"}))->capture_default_str();
}

bench::TraceSettings TraceFlags::resolve(std::uint64_t seed) const {
  bench::TraceSettings s = settings;
  s.tracer = tracer == "image-source" ? bench::Tracer::kImageSource : bench::Tracer::kStochastic;
  s.seed = seed;
  return s;
}

geo::AirModel TraceFlags::air_model() const { return air == "none" ? geo::AirModel::none() : geo::AirModel::standard(); }

json TraceFlags::to_json() const {
  return {{"tracer", tracer},
          {"rays", settings.n_rays},
          {"max_time", settings.max_time},
          {"detector_radius", settings.detector_radius},
          {"order", settings.image_order},
          {"air", air}};
}

void OptFlags::add_to(CLI::App& app) {
  app.add_option("--tol", options.tol, "Solver tolerance on the objective and projected gradient")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-iter", options.max_iter, "Solver iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--rho-min", options.rho_min, "Lower reflectivity bound")->capture_default_str();
  app.add_option("--rho-max", options.rho_max, "Upper reflectivity bound")->capture_default_str();
  app.add_flag("--no-calibration", no_calibration, "Solve the slope objective once, without envelope calibration");
}

opt::MaterialOptOptions OptFlags::resolve(const geo::AirModel& air) const {
  opt::MaterialOptOptions o = options;
  o.air = air;
  o.calibrate_envelope = !no_calibration;
  return o;
}

json OptFlags::to_json() const {
  return {{"tol", options.tol},
          {"max_iter", options.max_iter},
          {"rho_min", options.rho_min},
          {"rho_max", options.rho_max},
          {"calibration", !no_calibration}};
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(fmt::format("write failed: {}", path.string()));
}

json optimization_report(const opt::AllBandsResult& fit, const geo::RoomModel& room) {
  const dsp::BandSet& bands = dsp::BandSet::t60();
  json per_band = json::array();
  for (std::size_t b = 0; b < fit.bands.size(); ++b) {
    const opt::BandOptimization& bo = fit.bands[b];
    json jb = {{"band_hz", bands.center(b)},
               {"ok", bo.ok},
               {"target_t60_s", bo.target_t60},
               {"inherited", bo.inherited},
               {"source_band_hz", bo.source_band ? json(bands.center(*bo.source_band)) : json(nullptr)}};
    if (bo.ok) {
      jb["converged"] = bo.result.converged;
      jb["objective"] = bo.result.objective;
      jb["iterations"] = bo.result.iterations;
      jb["fit_target_t60_s"] = bo.fit_target_t60;
      jb["envelope_t60_s"] = bo.envelope_t60 > 0.0 ? json(bo.envelope_t60) : json(nullptr);
      jb["calibration_steps"] = bo.calibration_steps;
    } else {
      jb["error"] = bo.error;
    }
    per_band.push_back(jb);
  }
  json rho = json::object();
  for (std::size_t m = 0; m < room.num_materials(); ++m) {
    std::vector<double> row(static_cast<std::size_t>(fit.rho.cols()));
    for (Eigen::Index b = 0; b < fit.rho.cols(); ++b) row[static_cast<std::size_t>(b)] = fit.rho(static_cast<Eigen::Index>(m), b);
    rho[room.materials()[m].name] = row;
  }
  return {{"all_ok", fit.all_ok()}, {"bands", per_band}, {"reflectivity", rho}};
}

void write_trace_csv(const fs::path& path, const opt::AllBandsResult& fit) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << "band_hz,iteration,objective,grad_max\n";
  const dsp::BandSet& bands = dsp::BandSet::t60();
  for (std::size_t b = 0; b < fit.bands.size(); ++b) {
    const auto& trace = fit.bands[b].result.trace;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      out << fmt::format("{},{},{:.10g},{:.10g}\n", bands.center(b), i, trace[i].f, trace[i].grad_max);
    }
  }
  if (!out) throw std::runtime_error(fmt::format("write failed: {}", path.string()));
}

geo::Scene with_fitted_materials(const geo::Scene& scene, const opt::AllBandsResult& fit) {
  geo::Scene out = scene;
  const auto fitted = fit.apply_to(scene.room.materials());
  for (std::size_t m = 0; m < fitted.size(); ++m) out.room.set_reflectivity(m, fitted[m].reflectivity);
  return out;
}

}  // namespace roomrelight::cli
