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

#include <cstddef>
#include <span>
#include <vector>

#include "roomrelight/dsp/audio.hpp"
#include "roomrelight/dsp/fir.hpp"

namespace roomrelight::dsp {

/// Kernels longer than this go through the FFT path.
inline constexpr std::size_t kDirectConvolutionMaxTaps = 1024;

/// Full linear convolution, length len(x) + len(h) - 1.
///
/// Throws std::invalid_argument on a sample-rate mismatch or empty input.
AudioBuffer convolve(const AudioBuffer& x, const AudioBuffer& h);
AudioBuffer convolve(const AudioBuffer& x, const FirFilter& h);

std::vector<double> convolve_direct(std::span<const double> x, std::span<const double> h);
std::vector<double> convolve_fft(std::span<const double> x, std::span<const double> h);

}  // namespace roomrelight::dsp
