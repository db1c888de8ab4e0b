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
#include <span>
#include <vector>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/augment/augmentation.hpp"
#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::augment {

struct AugmentationSpec {
  double t60_lo = 0.1;
  double t60_hi = 1.5;
  int t60_grid = 14;
  double drr_lo = -6.0;
  double drr_hi = 12.0;
  bool augment_drr = true;
  EqDistribution eq_model;
  double eq_std_inflation = 1.25;
  std::size_t count = 7000;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when a range or count is malformed.
  void validate() const;
};

/// One augmented IR with labels measured from it.
struct AugmentedExample {
  std::size_t index = 0;
  std::size_t source_index = 0;
  analysis::ImpulseResponse ir;
  double target_t60 = 0.0;
  double target_drr_db = 0.0;
  dsp::BandProfile target_eq;
  double t60_fullband = 0.0;  ///< measured broadband T60 of `ir`
  dsp::BandProfile t60;       ///< measured per T60 band
  dsp::BandProfile eq;        ///< measured per EQ band
  double drr_db = 0.0;
  bool drr_anechoic = false;
};

/// Bin that item `index` targets: items cycle through the grid so every bin
/// receives floor(count/grid) or ceil(count/grid) targets.
std::size_t target_bin(std::size_t index, const AugmentationSpec& spec);

/// Item RNG seeded from (seed, index) only, so output does not depend on
/// scheduling.
Rng item_rng(std::uint64_t seed, std::size_t index);

/// Retargets T60, then DRR, then EQ for `spec.count` items drawn from `irs`
/// and labels each result by measuring it. Items that fail are skipped with
/// a warning. Runs in parallel with deterministic output.
///
/// Throws std::invalid_argument on an empty corpus or invalid spec.
std::vector<AugmentedExample> build_augmented_corpus(std::span<const analysis::ImpulseResponse> irs,
                                                     const AugmentationSpec& spec);

/// Counts measured broadband T60 per grid bin; values outside the range
/// land in the end bins.
std::vector<std::size_t> t60_histogram(std::span<const AugmentedExample> examples, const AugmentationSpec& spec);

}  // namespace roomrelight::augment
