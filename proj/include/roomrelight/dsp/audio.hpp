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

namespace roomrelight::dsp {

/// Uniformly sampled mono signal.
///
/// The constructor rejects a non-positive sample rate and non-finite samples,
/// so every AudioBuffer that exists satisfies both invariants. Mutation goes
/// through `take_samples()` and a fresh constructor call.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(std::vector<double> samples, int sample_rate);

  static AudioBuffer zeros(std::size_t length, int sample_rate);

  [[nodiscard]] std::span<const double> samples() const { return samples_; }
  [[nodiscard]] int sample_rate() const { return sample_rate_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] bool empty() const { return samples_.empty(); }
  [[nodiscard]] double duration_seconds() const;
  [[nodiscard]] double operator[](std::size_t i) const { return samples_[i]; }

  [[nodiscard]] double energy() const;
  [[nodiscard]] double peak_abs() const;

  [[nodiscard]] AudioBuffer scaled(double gain) const;
  /// Samples [begin, begin + length), zero-filled past the end.
  [[nodiscard]] AudioBuffer segment(std::size_t begin, std::size_t length) const;

  std::vector<double> take_samples() && { return std::move(samples_); }

 private:
  std::vector<double> samples_;
  int sample_rate_ = 0;
};

/// Sample-wise a + b; the shorter signal is zero-extended.
AudioBuffer mix(const AudioBuffer& a, const AudioBuffer& b);

/// Delays x by `samples` zeros (output grows by that many samples).
AudioBuffer delay(const AudioBuffer& x, std::size_t samples);

}  // namespace roomrelight::dsp
