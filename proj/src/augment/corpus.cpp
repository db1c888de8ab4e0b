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

#include "roomrelight/augment/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <spdlog/spdlog.h>
#include <tbb/parallel_for.h>

#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/analysis/drr.hpp"
#include "roomrelight/analysis/eq.hpp"

namespace roomrelight::augment {

void AugmentationSpec::validate() const {
  if (!(t60_lo > 0.0 && t60_lo < t60_hi)) throw std::invalid_argument("AugmentationSpec: need 0 < t60_lo < t60_hi");
  if (t60_grid < 1) throw std::invalid_argument("AugmentationSpec: t60_grid must be at least 1");
  if (augment_drr && !(drr_lo <= drr_hi)) throw std::invalid_argument("AugmentationSpec: need drr_lo <= drr_hi");
  if (!(eq_std_inflation >= 1.0)) throw std::invalid_argument("AugmentationSpec: eq_std_inflation must be >= 1");
  eq_model.validate();
}

std::size_t target_bin(std::size_t index, const AugmentationSpec& spec) {
  return index % static_cast<std::size_t>(spec.t60_grid);
}

Rng item_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return Rng(seq);
}

namespace {

constexpr int kChainCorrectionPasses = 3;
constexpr double kChainCorrectionTolerance = 0.02;

AugmentedExample make_item(std::span<const analysis::ImpulseResponse> irs, const AugmentationSpec& spec,
                           std::size_t index) {
  Rng rng = item_rng(spec.seed, index);
  const double width = (spec.t60_hi - spec.t60_lo) / spec.t60_grid;
  const double bin_lo = spec.t60_lo + width * static_cast<double>(target_bin(index, spec));
  const double target_t60 = std::uniform_real_distribution<double>(bin_lo, bin_lo + width)(rng);
  const std::size_t source = std::uniform_int_distribution<std::size_t>(0, irs.size() - 1)(rng);
  const double target_drr = spec.augment_drr ? std::uniform_real_distribution<double>(spec.drr_lo, spec.drr_hi)(rng) : 0.0;

  const auto chain = [&](double requested_t60) {
    analysis::ImpulseResponse ir = augment_t60(irs[source], requested_t60);
    if (spec.augment_drr) ir = augment_drr(ir, target_drr);
    // Same EQ draw on every pass.
    Rng eq_rng = rng;
    return augment_eq(ir, spec.eq_model, spec.eq_std_inflation, eq_rng);
  };

  // Re-shaping the spectrum shifts which bands dominate the broadband decay,
  // so the T60 request is rescaled until the finished IR measures on target.
  double requested = target_t60;
  std::optional<EqAugmentation> eq;
  analysis::DecayFit broadband;
  double best_err = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass <= kChainCorrectionPasses; ++pass) {
    EqAugmentation candidate = chain(requested);
    const analysis::DecayFit fit = analysis::fullband_decay(candidate.ir);
    if (!fit.valid) break;
    const double err = std::abs(fit.t60 / target_t60 - 1.0);
    if (err < best_err) {
      best_err = err;
      eq = std::move(candidate);
      broadband = fit;
    }
    if (err <= kChainCorrectionTolerance) break;
    requested *= target_t60 / fit.t60;
  }
  if (!eq) throw std::runtime_error("augmented IR has no measurable broadband decay");
  const analysis::DrrResult drr = analysis::compute_drr(eq->ir);
  dsp::BandProfile t60 = [&] {
    try {
      return analysis::estimate_t60(eq->ir, dsp::BandSet::t60());
    } catch (const analysis::T60EstimationError& e) {
      return e.profile();
    }
  }();
  dsp::BandProfile eq_measured = analysis::extract_eq(eq->ir, dsp::BandSet::eq());
  return AugmentedExample{index,
                          source,
                          std::move(eq->ir),
                          target_t60,
                          target_drr,
                          std::move(eq->target_eq),
                          broadband.t60,
                          std::move(t60),
                          std::move(eq_measured),
                          drr.db,
                          drr.anechoic};
}

}  // namespace

std::vector<AugmentedExample> build_augmented_corpus(std::span<const analysis::ImpulseResponse> irs,
                                                     const AugmentationSpec& spec) {
  if (irs.empty()) throw std::invalid_argument("build_augmented_corpus: empty IR corpus");
  spec.validate();
  std::vector<std::optional<AugmentedExample>> slots(spec.count);
  tbb::parallel_for(std::size_t{0}, spec.count, [&](std::size_t i) {
    try {
      slots[i] = make_item(irs, spec, i);
    } catch (const std::exception& e) {
      spdlog::warn("build_augmented_corpus: item {} skipped: {}", i, e.what());
    }
  });
  std::vector<AugmentedExample> out;
  out.reserve(spec.count);
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

std::vector<std::size_t> t60_histogram(std::span<const AugmentedExample> examples, const AugmentationSpec& spec) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(spec.t60_grid), 0);
  const double width = (spec.t60_hi - spec.t60_lo) / spec.t60_grid;
  for (const auto& ex : examples) {
    const auto bin = static_cast<long>(std::floor((ex.t60_fullband - spec.t60_lo) / width));
    counts[static_cast<std::size_t>(std::clamp<long>(bin, 0, spec.t60_grid - 1))]++;
  }
  return counts;
}

}  // namespace roomrelight::augment
