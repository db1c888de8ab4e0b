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

#include "roomrelight/synth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <tbb/parallel_for.h>

#include "roomrelight/dsp/bands.hpp"
#include "roomrelight/dsp/filterbank.hpp"

namespace roomrelight::synth {

Eigen::MatrixXd reflectivity_matrix(std::span<const geo::MaterialCoeffs> materials) {
  Eigen::MatrixXd rho(static_cast<Eigen::Index>(materials.size()), static_cast<Eigen::Index>(dsp::kNumT60Bands));
  for (std::size_t m = 0; m < materials.size(); ++m) {
    for (std::size_t b = 0; b < dsp::kNumT60Bands; ++b) {
      rho(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(b)) = materials[m].reflectivity[b];
    }
  }
  return rho;
}

analysis::ImpulseResponse synthesize_ir(std::span<const geo::PathRecord> paths, const Eigen::MatrixXd& rho,
                                        const geo::AirModel& air, const SynthesisOptions& options) {
  if (paths.empty()) throw std::invalid_argument("synthesize_ir: no paths");
  const int fs = options.sample_rate;
  if (fs < kMinSynthesisRate) {
    throw std::invalid_argument(
        fmt::format("synthesize_ir: sample rate {} Hz is below the {} Hz minimum", fs, kMinSynthesisRate));
  }
  const auto n_bands = static_cast<Eigen::Index>(kRenderBandsHz.size());
  Eigen::MatrixXd render_rho;
  if (rho.cols() == n_bands) {
    render_rho = rho;
  } else if (rho.cols() == n_bands - 1) {
    render_rho.resize(rho.rows(), n_bands);
    render_rho.col(0) = rho.col(0);
    render_rho.rightCols(n_bands - 1) = rho;
  } else {
    throw std::invalid_argument(fmt::format("synthesize_ir: expected 7 or 8 band columns, got {}", rho.cols()));
  }
  for (const auto& p : paths) {
    if (static_cast<Eigen::Index>(p.bounce_counts.size()) != render_rho.rows()) {
      throw std::invalid_argument("synthesize_ir: path bounce counts do not match the material count");
    }
  }

  double t_min = paths.front().arrival_time, t_max = t_min;
  for (const auto& p : paths) {
    t_min = std::min(t_min, p.arrival_time);
    t_max = std::max(t_max, p.arrival_time);
  }
  const auto length = static_cast<std::size_t>(std::lround(t_max * fs)) + 1 +
                      static_cast<std::size_t>(std::ceil(options.tail_s * fs));

  std::vector<double> centers;
  for (double c : kRenderBandsHz) {
    if (dsp::octave_lower_edge(c) < fs / 2.0) centers.push_back(c);
  }
  const dsp::OctaveFilterbank bank(centers, fs);

  std::vector<dsp::AudioBuffer> band_out(centers.size());
  tbb::parallel_for(std::size_t{0}, centers.size(), [&](std::size_t b) {
    // Render band 0 is 62.5 Hz, which shares the 125 Hz air coefficient.
    const double gamma = air.gamma.at(b == 0 ? 0 : b - 1);
    const Eigen::VectorXd col = render_rho.col(static_cast<Eigen::Index>(b));
    const std::vector<double> band_rho(col.data(), col.data() + col.size());
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(b)};
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> train(length, 0.0);
    for (const auto& p : paths) {
      const bool positive = coin(rng);
      const double amp = std::sqrt(geo::path_energy(p, band_rho, gamma));
      train[static_cast<std::size_t>(std::lround(p.arrival_time * fs))] += p.order == 0 || positive ? amp : -amp;
    }
    band_out[b] = bank.apply_band(dsp::AudioBuffer(std::move(train), fs), b);
  });

  std::vector<double> sum(length, 0.0);
  for (const auto& band : band_out) {
    const auto s = band.samples();
    for (std::size_t i = 0; i < length; ++i) sum[i] += s[i];
  }
  return analysis::ImpulseResponse(dsp::AudioBuffer(std::move(sum), fs),
                                   static_cast<std::size_t>(std::lround(t_min * fs)));
}

analysis::ImpulseResponse synthesize_ir(std::span<const geo::PathRecord> paths,
                                        std::span<const geo::MaterialCoeffs> materials, const geo::AirModel& air,
                                        const SynthesisOptions& options) {
  return synthesize_ir(paths, reflectivity_matrix(materials), air, options);
}

}  // namespace roomrelight::synth
