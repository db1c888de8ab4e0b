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

#include "roomrelight/dsp/fir.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "roomrelight/dsp/fft.hpp"
#include "roomrelight/dsp/spectrum.hpp"

namespace roomrelight::dsp {
namespace {

struct Node {
  double hz;
  double target_db;
};

std::vector<Node> design_nodes(const BandProfile& gains) {
  std::vector<Node> nodes;
  const BandSet& bands = gains.bands();
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!std::isfinite(gains.value(i))) {
      throw std::invalid_argument(fmt::format("design_fir_gains: non-finite gain at {} Hz", bands.center(i)));
    }
    nodes.push_back({bands.center(i), gains.value(i)});
  }
  if (!bands.index_of(kReferenceBandHz)) nodes.push_back({kReferenceBandHz, 0.0});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.hz < b.hz; });
  return nodes;
}

// Piecewise-linear in log2(f), flat outside the node range.
double interpolate_db(const std::vector<Node>& nodes, const std::vector<double>& node_db, double hz) {
  if (hz <= nodes.front().hz) return node_db.front();
  if (hz >= nodes.back().hz) return node_db.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), hz,
                                   [](double f, const Node& n) { return f < n.hz; });
  const std::size_t j = static_cast<std::size_t>(it - nodes.begin());
  const double x0 = std::log2(nodes[j - 1].hz), x1 = std::log2(nodes[j].hz);
  const double u = (std::log2(hz) - x0) / (x1 - x0);
  return node_db[j - 1] + u * (node_db[j] - node_db[j - 1]);
}

std::vector<double> realize(const std::vector<Node>& nodes, const std::vector<double>& node_db,
                            const FirDesignOptions& opt, const RealFft& grid) {
  const std::size_t nfft = grid.size();
  const double fs = opt.sample_rate;
  std::vector<std::complex<double>> target(grid.bins());
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double hz = fs * static_cast<double>(k) / static_cast<double>(nfft);
    double db = interpolate_db(nodes, node_db, std::max(hz, 1e-3));
    if (opt.shelf_db && hz >= opt.shelf_start_hz) db = *opt.shelf_db;
    target[k] = db_to_amplitude(db);
  }
  const std::vector<double> impulse = grid.inverse(target);

  const std::size_t taps = opt.taps;
  const std::size_t half = (taps - 1) / 2;
  std::vector<double> h(taps);
  for (std::size_t n = 0; n < taps; ++n) {
    // Hann of length taps + 2 with its zero end points dropped.
    const double w = std::pow(std::sin(std::numbers::pi * static_cast<double>(n + 1) / static_cast<double>(taps + 1)), 2);
    const std::size_t idx = (n + nfft - half) % nfft;
    h[n] = impulse[idx] * w;
  }
  for (std::size_t n = 0; n < half; ++n) {
    const double avg = 0.5 * (h[n] + h[taps - 1 - n]);
    h[n] = avg;
    h[taps - 1 - n] = avg;
  }
  return h;
}

}  // namespace

FirFilter design_fir_gains(const BandProfile& gains_db, const FirDesignOptions& opt) {
  if (opt.taps < 3 || opt.taps % 2 == 0) {
    throw std::invalid_argument(fmt::format("design_fir_gains: tap count must be odd and >= 3, got {}", opt.taps));
  }
  if (opt.sample_rate <= 0) throw std::invalid_argument("design_fir_gains: sample rate must be positive");
  if (opt.shelf_db && !std::isfinite(*opt.shelf_db)) throw std::invalid_argument("design_fir_gains: non-finite shelf gain");

  const std::vector<Node> nodes = design_nodes(gains_db);
  const double nyquist = opt.sample_rate / 2.0;
  for (const Node& n : nodes) {
    if (octave_lower_edge(n.hz) >= nyquist) {
      throw std::invalid_argument(fmt::format("design_fir_gains: band centered at {} Hz lies above Nyquist", n.hz));
    }
  }
  std::vector<double> centers, wanted;
  for (const Node& n : nodes) {
    centers.push_back(n.hz);
    wanted.push_back(n.target_db);
  }

  const RealFft grid(next_pow2(std::max<std::size_t>(8 * opt.taps, 8192)));
  std::vector<double> node_db = wanted;
  std::vector<double> taps = realize(nodes, node_db, opt, grid);
  for (int it = 0; it < opt.refine_iterations; ++it) {
    const std::vector<double> got = octave_band_levels_db(taps, opt.sample_rate, centers);
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      // Octaves swallowed by the shelf cannot be steered by their node.
      if (!std::isfinite(got[i]) || (opt.shelf_db && octave_lower_edge(centers[i]) >= opt.shelf_start_hz)) continue;
      const double err = wanted[i] - got[i];
      worst = std::max(worst, std::abs(err));
      node_db[i] += err;
    }
    if (!(worst > opt.refine_tolerance_db)) break;
    taps = realize(nodes, node_db, opt, grid);
  }

  FirFilter out;
  out.delay_samples = (opt.taps - 1) / 2;
  out.sample_rate = opt.sample_rate;
  out.taps = std::move(taps);
  return out;
}

}  // namespace roomrelight::dsp
