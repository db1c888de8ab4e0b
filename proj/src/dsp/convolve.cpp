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

#include "roomrelight/dsp/convolve.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "roomrelight/dsp/fft.hpp"

namespace roomrelight::dsp {

std::vector<double> convolve_direct(std::span<const double> x, std::span<const double> h) {
  if (x.empty() || h.empty()) throw std::invalid_argument("convolve: empty input");
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    double* out = y.data() + i;
    for (std::size_t k = 0; k < h.size(); ++k) out[k] += xi * h[k];
  }
  return y;
}

std::vector<double> convolve_fft(std::span<const double> x, std::span<const double> h) {
  if (x.empty() || h.empty()) throw std::invalid_argument("convolve: empty input");
  const std::size_t len = x.size() + h.size() - 1;
  const RealFft fft(next_pow2(len));
  auto a = fft.forward(x);
  const auto b = fft.forward(h);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= b[k];
  std::vector<double> y = fft.inverse(a);
  y.resize(len);
  return y;
}

AudioBuffer convolve(const AudioBuffer& x, const AudioBuffer& h) {
  if (x.sample_rate() != h.sample_rate()) {
    throw std::invalid_argument(
        fmt::format("convolve: sample rates differ ({} Hz vs {} Hz)", x.sample_rate(), h.sample_rate()));
  }
  auto y = h.size() > kDirectConvolutionMaxTaps ? convolve_fft(x.samples(), h.samples())
                                                 : convolve_direct(x.samples(), h.samples());
  return AudioBuffer(std::move(y), x.sample_rate());
}

AudioBuffer convolve(const AudioBuffer& x, const FirFilter& h) { return convolve(x, h.as_buffer()); }

}  // namespace roomrelight::dsp
