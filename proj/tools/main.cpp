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

// roomrelight: command-line front end.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>
#include <tbb/global_control.h>

#include "common.hpp"

namespace {

using roomrelight::cli::GlobalOptions;

// ROOMRELIGHT_THREADS caps whatever --threads asks for.
int resolve_threads(int requested) {
  int cap = 0;
  if (const char* env = std::getenv("ROOMRELIGHT_THREADS"); env && *env) {
    try {
      cap = std::stoi(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("ROOMRELIGHT_THREADS is not an integer: ") + env);
    }
    if (cap < 1) throw std::invalid_argument("ROOMRELIGHT_THREADS must be at least 1");
  }
  if (requested > 0 && cap > 0) return std::min(requested, cap);
  return requested > 0 ? requested : cap;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOptions global;
  CLI::App app{"Room acoustics estimation, material fitting and IR rendering", "roomrelight"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", global.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--verbosity", global.verbosity, "Log level")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}))
      ->capture_default_str();
  app.add_option("--output-dir", global.output_dir, "Directory for relative output paths")->capture_default_str();

  auto commands = roomrelight::cli::make_commands(global);
  for (auto& c : commands) c->add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto logger = spdlog::stderr_color_mt("roomrelight");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(global.verbosity));

  roomrelight::cli::Command* selected = nullptr;
  for (auto& c : commands) {
    if (c->app()->parsed()) selected = c.get();
  }

  try {
    const int threads = resolve_threads(global.threads);
    std::optional<tbb::global_control> limit;
    if (threads > 0) limit.emplace(tbb::global_control::max_allowed_parallelism, static_cast<std::size_t>(threads));

    nlohmann::json config = {{"command", selected->app()->get_name()},
                             {"seed", global.seed},
                             {"threads", threads},
                             {"verbosity", global.verbosity},
                             {"output_dir", global.output_dir.string()},
                             {"options", selected->config()}};
    spdlog::info("config {}", config.dump());
    return selected->run();
  } catch (const CLI::Error& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
