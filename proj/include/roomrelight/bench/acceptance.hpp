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
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace roomrelight::bench {

struct CriterionResult {
  int id = 0;
  std::string key;    ///< short name used by filters
  std::string title;
  bool passed = false;
  std::string summary;  ///< one line with the decisive numbers
  nlohmann::json metrics;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Comma-separated criterion keys, numbers or key substrings; empty runs all.
  std::string filter;
  std::uint64_t seed = 0;
  std::size_t augment_items_per_bin = 100;
  bool extended_sweep = true;  ///< informative sweep points above 1.5 s
};

/// Keys of all criteria in order: gradient, slope, sweep, analyzer, eq,
/// sabine, augmentation, match.
const std::vector<std::string>& criterion_keys();

/// Whether criterion `id` with `key` is selected by `filter`.
bool filter_selects(const std::string& filter, int id, const std::string& key);

/// Runs the selected criteria in order, calling `on_result` after each.
/// An exception inside a criterion fails that criterion only.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// {"passed": all, "criteria": [{id, key, title, passed, summary, seconds, metrics}]}
nlohmann::json acceptance_json(const std::vector<CriterionResult>& results);

}  // namespace roomrelight::bench
