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

#include "roomrelight/analysis/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "roomrelight/dsp/filterbank.hpp"

namespace roomrelight::analysis {
namespace {

struct FitWindow {
  double upper_db;
  double lower_db;
  double required_range_db;
};

constexpr FitWindow kWindows[] = {{-5.0, -35.0, 45.0}, {-5.0, -25.0, 35.0}, {-5.0, -15.0, 25.0}};
constexpr double kMinTailSeconds = 0.25;

std::vector<double> moving_average(std::span<const double> x, std::size_t width) {
  std::vector<double> prefix(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) prefix[i + 1] = prefix[i] + x[i];
  const std::size_t half = width / 2;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t lo = i > half ? i - half : 0;
    const std::size_t hi = std::min(x.size(), i + half + 1);
    out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

double octave_bandwidth(double center, int sample_rate) {
  return std::min(dsp::octave_upper_edge(center), sample_rate / 2.0) - dsp::octave_lower_edge(center);
}

}  // namespace

DecayFit fit_decay(std::span<const double> energy, double rate, std::size_t start, const DecayFitOptions& opt) {
  DecayFit fit;
  fit.start = start;
  if (start >= energy.size() || !(rate > 0.0)) return fit;
  const std::span<const double> e = energy.subspan(start);
  const std::size_t n = e.size();

  const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(opt.tail_fraction * static_cast<double>(n)));
  double first_half = 0.0, second_half = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) (i < n - tail / 2 ? first_half : second_half) += e[i];
  const double floor = (first_half + second_half) / static_cast<double>(tail);
  if (tail >= 2) {
    const double a = first_half / static_cast<double>(tail - tail / 2);
    const double b = second_half / static_cast<double>(tail / 2);
    fit.noise_floor = a > 0.0 && b > 0.5 * a;
  }

  const auto width = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(opt.smoothing_s * rate)));
  const std::vector<double> env = moving_average(e, width);
  const std::size_t peak = static_cast<std::size_t>(std::max_element(env.begin(), env.end()) - env.begin());
  if (!(env[peak] > 0.0)) return fit;

  std::size_t stop = n;
  if (floor > 0.0) {
    fit.dynamic_range_db = 10.0 * std::log10(env[peak] / floor);
    const double cut = floor * std::pow(10.0, opt.floor_margin_db / 10.0);
    for (std::size_t i = peak; i < n; ++i) {
      if (env[i] < cut) {
        stop = i;
        break;
      }
    }
  } else {
    fit.dynamic_range_db = std::numeric_limits<double>::infinity();
  }

  // Backward (Schroeder) integration over the retained part.
  std::vector<double> edc(stop);
  double acc = 0.0;
  for (std::size_t i = stop; i-- > 0;) {
    acc += e[i];
    edc[i] = acc;
  }
  if (!(acc > 0.0)) return fit;
  fit.edc_db.resize(stop);
  for (std::size_t i = 0; i < stop; ++i) {
    fit.edc_db[i] = edc[i] > 0.0 ? 10.0 * std::log10(edc[i] / acc) : -std::numeric_limits<double>::infinity();
  }

  for (const FitWindow& w : kWindows) {
    if (fit.dynamic_range_db < w.required_range_db) continue;
    std::size_t i0 = 0;
    while (i0 < stop && fit.edc_db[i0] > w.upper_db) ++i0;
    std::size_t i1 = i0;
    while (i1 < stop && fit.edc_db[i1] >= w.lower_db) ++i1;
    if (i1 - i0 < opt.min_fit_points) return fit;

    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const auto m = static_cast<double>(i1 - i0);
    for (std::size_t i = i0; i < i1; ++i) {
      const double t = static_cast<double>(i) / rate;
      st += t;
      sy += fit.edc_db[i];
      stt += t * t;
      sty += t * fit.edc_db[i];
    }
    const double slope = (m * sty - st * sy) / (m * stt - st * st);
    if (!(slope < 0.0) || !std::isfinite(slope)) return fit;
    fit.slope_db_per_s = slope;
    fit.fit_range_db = {w.upper_db, w.lower_db};
    fit.t60 = -60.0 / slope;
    fit.valid = true;
    return fit;
  }
  return fit;
}

std::vector<DecayFit> analyze_decay(const ImpulseResponse& ir, const dsp::BandSet& bands) {
  const int fs = ir.sample_rate();
  const double tail_s = static_cast<double>(ir.size() - ir.direct_index()) / fs;
  if (tail_s < kMinTailSeconds) {
    throw std::invalid_argument(fmt::format(
        "estimate_t60: impulse response needs at least {} s after the direct arrival, has {:.3f} s", kMinTailSeconds,
        tail_s));
  }
  const dsp::OctaveFilterbank bank(bands, fs);
  std::vector<DecayFit> fits;
  fits.reserve(bands.size());
  std::vector<double> energy(ir.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const dsp::AudioBuffer y = bank.apply_band(ir.buffer(), b);
    for (std::size_t i = 0; i < energy.size(); ++i) energy[i] = y[i] * y[i];
    DecayFit fit = fit_decay(energy, fs, ir.direct_index());
    if (fit.valid && fit.t60 * octave_bandwidth(bands.center(b), fs) < kMinDecayBandwidthProduct) {
      fit.valid = false;
    }
    fits.push_back(std::move(fit));
  }
  return fits;
}

dsp::BandProfile estimate_t60(const ImpulseResponse& ir, const dsp::BandSet& bands) {
  const std::vector<DecayFit> fits = analyze_decay(ir, bands);
  std::vector<double> values(fits.size(), 0.0);
  std::vector<bool> valid(fits.size(), false);
  for (std::size_t b = 0; b < fits.size(); ++b) {
    if (fits[b].valid) {
      values[b] = fits[b].t60;
      valid[b] = true;
    }
  }
  dsp::BandProfile profile(bands, std::move(values), std::move(valid));
  if (!profile.any_valid()) {
    throw T60EstimationError("estimate_t60: no band has a measurable decay", profile);
  }
  return profile;
}

DecayFit fullband_decay(const ImpulseResponse& ir) {
  std::vector<double> energy(ir.size());
  for (std::size_t i = 0; i < energy.size(); ++i) energy[i] = ir.samples()[i] * ir.samples()[i];
  return fit_decay(energy, ir.sample_rate(), ir.direct_index());
}

}  // namespace roomrelight::analysis
