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

#include "roomrelight/dsp/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "roomrelight/dsp/fft.hpp"

namespace roomrelight::dsp {
namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Eigen::MatrixXd mel_weights(int n_mel, int nfft, int sample_rate) {
  const int bins = nfft / 2 + 1;
  const double top = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(n_mel) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(n_mel + 1));
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_mel, bins);
  for (int m = 0; m < n_mel; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / nfft;
      double v = 0.0;
      if (f > lo && f <= mid) v = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) v = (hi - f) / (hi - mid);
      w(m, k) = v;
    }
    const double area = w.row(m).sum();
    if (area > 0.0) w.row(m) /= area;
  }
  return w;
}

}  // namespace

Spectrogram log_mel_features(const AudioBuffer& x, int n_mel, int window, double overlap) {
  if (n_mel <= 0 || window <= 1) throw std::invalid_argument("log_mel_features: bad Mel/window size");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("log_mel_features: overlap must be in [0, 1)");
  const int hop = std::max(1, static_cast<int>(std::lround(window * (1.0 - overlap))));
  if (x.size() < static_cast<std::size_t>(window)) {
    throw std::invalid_argument("log_mel_features: clip shorter than one analysis window");
  }
  const int frames = 1 + static_cast<int>((x.size() - static_cast<std::size_t>(window)) / static_cast<std::size_t>(hop));

  // Periodic Hann.
  std::vector<double> hann(static_cast<std::size_t>(window));
  for (int n = 0; n < window; ++n) {
    hann[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / window);
  }
  const Eigen::MatrixXd weights = mel_weights(n_mel, window, x.sample_rate());
  const RealFft fft(static_cast<std::size_t>(window));

  Eigen::MatrixXd power(weights.cols(), frames);
  std::vector<double> frame(static_cast<std::size_t>(window));
  const auto samples = x.samples();
  for (int t = 0; t < frames; ++t) {
    const std::size_t start = static_cast<std::size_t>(t) * static_cast<std::size_t>(hop);
    for (int n = 0; n < window; ++n) frame[n] = samples[start + n] * hann[n];
    const auto spec = fft.forward(frame);
    for (std::size_t k = 0; k < spec.size(); ++k) power(static_cast<Eigen::Index>(k), t) = std::norm(spec[k]);
  }

  Spectrogram out;
  out.values = (weights * power).unaryExpr([](double p) {
    return p > 0.0 ? std::max(10.0 * std::log10(p), kMelFloorDb) : kMelFloorDb;
  });
  out.mel_bands = n_mel;
  out.hop = hop;
  out.window = window;
  return out;
}

}  // namespace roomrelight::dsp
