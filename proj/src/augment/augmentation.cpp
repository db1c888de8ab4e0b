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

#include "roomrelight/augment/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/analysis/drr.hpp"
#include "roomrelight/analysis/eq.hpp"
#include "roomrelight/dsp/convolve.hpp"
#include "roomrelight/dsp/fir.hpp"

namespace roomrelight::augment {
namespace {

constexpr int kEqCorrectionPasses = 3;
constexpr double kEqCorrectionToleranceDb = 0.5;
constexpr int kT60CorrectionPasses = 12;
constexpr double kT60CorrectionTolerance = 0.005;

double decay_rate(double t60) { return 3.0 * std::log(10.0) / t60; }

}  // namespace

void EqDistribution::validate() const {
  const std::size_t n = dsp::BandSet::eq().size();
  if (mean_db.size() != n || std_db.size() != n) {
    throw std::invalid_argument("EqDistribution: expected one mean and one std per EQ band");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(mean_db[i]) || !std::isfinite(std_db[i]) || std_db[i] < 0.0) {
      throw std::invalid_argument("EqDistribution: means must be finite and spreads non-negative");
    }
  }
}

EqDistribution fit_eq_distribution(std::span<const analysis::ImpulseResponse> irs) {
  if (irs.size() < 2) throw std::invalid_argument("fit_eq_distribution: need at least two impulse responses");
  const std::size_t n_bands = dsp::BandSet::eq().size();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < irs.size(); ++i) {
    try {
      const dsp::BandProfile eq = analysis::extract_eq(irs[i]);
      if (!eq.all_valid()) {
        spdlog::warn("fit_eq_distribution: IR {} has an unmeasurable EQ band, skipped", i);
        continue;
      }
      rows.emplace_back(eq.values().begin(), eq.values().end());
    } catch (const std::exception& e) {
      spdlog::warn("fit_eq_distribution: IR {} skipped: {}", i, e.what());
    }
  }
  if (rows.size() < 2) throw std::runtime_error("fit_eq_distribution: fewer than two measurable impulse responses");

  EqDistribution model;
  model.mean_db.assign(n_bands, 0.0);
  model.std_db.assign(n_bands, 0.0);
  const auto n = static_cast<double>(rows.size());
  for (std::size_t b = 0; b < n_bands; ++b) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[b];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[b] - mean) * (r[b] - mean);
    model.mean_db[b] = mean;
    model.std_db[b] = std::sqrt(ss / (n - 1.0));
  }
  return model;
}

std::size_t eq_compensation_taps(int sample_rate) {
  return 2 * static_cast<std::size_t>(std::lround(0.032 * sample_rate)) - 1;
}

analysis::ImpulseResponse equalize_to(const analysis::ImpulseResponse& ir, const dsp::BandProfile& target) {
  const dsp::BandSet& bands = dsp::BandSet::eq();
  if (!(target.bands() == bands)) throw std::invalid_argument("equalize_to: target must be over the EQ band set");
  const dsp::BandProfile source = analysis::extract_eq(ir, bands);

  std::vector<double> gains(bands.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    gains[b] = target.value(b) - (source.valid(b) ? source.value(b) : 0.0);
  }
  const std::size_t taps = eq_compensation_taps(ir.sample_rate());
  std::optional<analysis::ImpulseResponse> out;
  for (int pass = 0; pass < kEqCorrectionPasses; ++pass) {
    const dsp::FirFilter fir = dsp::design_fir_gains(dsp::BandProfile(bands, gains), taps, ir.sample_rate());
    out.emplace(dsp::convolve(ir.buffer(), fir), ir.direct_index() + fir.delay_samples);
    const dsp::BandProfile got = analysis::extract_eq(*out, bands);
    double worst = 0.0;
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (!got.valid(b)) continue;
      const double err = target.value(b) - got.value(b);
      worst = std::max(worst, std::abs(err));
      gains[b] += err;
    }
    if (worst < kEqCorrectionToleranceDb) break;
  }
  return *std::move(out);
}

EqAugmentation augment_eq(const analysis::ImpulseResponse& ir, const EqDistribution& model, double inflation,
                          Rng& rng) {
  model.validate();
  if (!(inflation >= 0.0)) throw std::invalid_argument("augment_eq: inflation must be non-negative");
  const dsp::BandSet& bands = dsp::BandSet::eq();
  std::vector<double> target(bands.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const double sd = inflation * model.std_db[b];
    target[b] = sd > 0.0 ? std::normal_distribution<double>(model.mean_db[b], sd)(rng) : model.mean_db[b];
  }
  dsp::BandProfile target_eq(bands, std::move(target));
  return {equalize_to(ir, target_eq), target_eq};
}

analysis::ImpulseResponse augment_t60(const analysis::ImpulseResponse& ir, double target_t60) {
  if (!(target_t60 > 0.0)) throw std::invalid_argument("augment_t60: target T60 must be positive");
  const analysis::DecayFit fit = analysis::fullband_decay(ir);
  if (!fit.valid) throw std::runtime_error("augment_t60: source T60 is not measurable");

  const int fs = ir.sample_rate();
  const std::size_t d = ir.direct_index();
  const std::size_t tail_start = d + analysis::direct_half_window(fs) + 1;
  const auto reweight = [&](double rate_change) {
    std::vector<double> h(ir.samples().begin(), ir.samples().end());
    // Only a lengthened decay lifts the noise floor.
    const std::size_t cut = rate_change > 0.0 && fit.noise_floor ? std::min(h.size(), fit.end()) : h.size();
    for (std::size_t i = tail_start; i < h.size(); ++i) {
      h[i] = i < cut ? h[i] * std::exp(rate_change * static_cast<double>(i - d) / fs) : 0.0;
    }
    return analysis::ImpulseResponse(dsp::AudioBuffer(std::move(h), fs), d);
  };

  // The broadband decay of a multi-slope IR responds nonlinearly to the
  // re-weighting, so the rate change is searched for: fixed-point steps
  // while unbracketed, bisection once a step would leave the bracket.
  double rate_change = decay_rate(fit.t60) - decay_rate(target_t60);
  if (rate_change == 0.0) return reweight(0.0);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::optional<analysis::ImpulseResponse> best;
  double best_err = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < kT60CorrectionPasses; ++pass) {
    analysis::ImpulseResponse out = reweight(rate_change);
    const analysis::DecayFit got = analysis::fullband_decay(out);
    double next = 0.0;
    if (got.valid) {
      const double err = std::abs(got.t60 / target_t60 - 1.0);
      if (err < best_err) {
        best_err = err;
        best = std::move(out);
      }
      if (err < kT60CorrectionTolerance) break;
      // A larger rate change lifts the tail and lengthens the decay.
      (got.t60 < target_t60 ? lo : hi) = rate_change;
      next = rate_change + decay_rate(got.t60) - decay_rate(target_t60);
    } else {
      // Too much lift leaves no clean decay to fit, too little leaves too few points.
      (rate_change > 0.0 ? hi : lo) = rate_change;
      next = 0.5 * rate_change;
    }
    if (!(next > lo && next < hi) && std::isfinite(lo) && std::isfinite(hi)) next = 0.5 * (lo + hi);
    rate_change = next;
  }
  if (!best) throw std::runtime_error("augment_t60: no re-weighting gives a measurable decay");
  return std::move(*best);
}

analysis::ImpulseResponse augment_drr(const analysis::ImpulseResponse& ir, double target_drr_db) {
  if (!std::isfinite(target_drr_db)) throw std::invalid_argument("augment_drr: target DRR must be finite");
  const auto x = ir.samples();
  const std::size_t half = analysis::direct_half_window(ir.sample_rate());
  const std::size_t d = ir.direct_index();
  const std::size_t lo = d > half ? d - half : 0;
  const std::size_t hi = std::min(x.size(), d + half + 1);
  double direct = 0.0, reverb = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) (i >= lo && i < hi ? direct : reverb) += x[i] * x[i];
  if (!(direct > 0.0)) throw std::invalid_argument("augment_drr: direct segment has no energy");
  if (!(reverb > 0.0)) throw std::runtime_error("augment_drr: no reverberant energy, DRR is unbounded");

  const double gain = std::sqrt(std::pow(10.0, target_drr_db / 10.0) * reverb / direct);
  std::vector<double> h(x.begin(), x.end());
  for (std::size_t i = lo; i < hi; ++i) h[i] *= gain;
  return analysis::ImpulseResponse(dsp::AudioBuffer(std::move(h), ir.sample_rate()), d);
}

}  // namespace roomrelight::augment
