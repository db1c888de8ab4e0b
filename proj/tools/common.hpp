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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roomrelight/bench/pipeline.hpp"
#include "roomrelight/geo/energy.hpp"
#include "roomrelight/opt/material_opt.hpp"

namespace roomrelight::cli {

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 0;  ///< 0 leaves the worker count to TBB
  std::string verbosity = "info";
  std::filesystem::path output_dir = ".";
};

/// One subcommand. Options are bound at registration; run() executes after
/// a successful parse and returns the process exit code.
class Command {
 public:
  explicit Command(const GlobalOptions& g) : global_(g) {}
  virtual ~Command() = default;
  Command(const Command&) = delete;
  Command& operator=(const Command&) = delete;

  virtual void add_to(CLI::App& parent) = 0;
  /// Subcommand flags after parsing, merged with the globals by the caller.
  [[nodiscard]] virtual nlohmann::json config() const = 0;
  virtual int run() = 0;

  [[nodiscard]] CLI::App* app() const { return app_; }

 protected:
  /// Relative paths land under --output-dir; parent directories are created.
  [[nodiscard]] std::filesystem::path output_path(const std::filesystem::path& p) const;

  const GlobalOptions& global_;
  CLI::App* app_ = nullptr;
};

std::vector<std::unique_ptr<Command>> make_commands(const GlobalOptions& g);

// Shared option groups.

struct TraceFlags {
  std::string tracer = "stochastic";
  bench::TraceSettings settings;
  std::string air = "standard";

  void add_to(CLI::App& app);
  /// Settings with the tracer kind resolved and the run seed applied.
  [[nodiscard]] bench::TraceSettings resolve(std::uint64_t seed) const;
  [[nodiscard]] geo::AirModel air_model() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct OptFlags {
  opt::MaterialOptOptions options;
  bool no_calibration = false;

  void add_to(CLI::App& app);
  [[nodiscard]] opt::MaterialOptOptions resolve(const geo::AirModel& air) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// Per-band report of a material fit, keyed by material name.
nlohmann::json optimization_report(const opt::AllBandsResult& fit, const geo::RoomModel& room);

/// Writes band_hz,iteration,objective,grad_max rows for every band.
void write_trace_csv(const std::filesystem::path& path, const opt::AllBandsResult& fit);

/// Copy of `scene` whose materials carry the fitted reflectivities.
geo::Scene with_fitted_materials(const geo::Scene& scene, const opt::AllBandsResult& fit);

}  // namespace roomrelight::cli
