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

#include "roomrelight/dsp/audio.hpp"

namespace roomrelight::analysis {

/// A room impulse response together with the sample index of its direct
/// arrival. Unless given explicitly the direct index is the global absolute
/// peak.
class ImpulseResponse {
 public:
  /// Throws std::invalid_argument on an empty or all-zero buffer.
  explicit ImpulseResponse(dsp::AudioBuffer buffer);
  /// Throws std::invalid_argument additionally if direct_index is out of range.
  ImpulseResponse(dsp::AudioBuffer buffer, std::size_t direct_index);

  [[nodiscard]] const dsp::AudioBuffer& buffer() const { return buffer_; }
  [[nodiscard]] std::span<const double> samples() const { return buffer_.samples(); }
  [[nodiscard]] int sample_rate() const { return buffer_.sample_rate(); }
  [[nodiscard]] std::size_t size() const { return buffer_.size(); }
  [[nodiscard]] std::size_t direct_index() const { return direct_index_; }
  [[nodiscard]] double direct_time() const {
    return static_cast<double>(direct_index_) / buffer_.sample_rate();
  }

 private:
  dsp::AudioBuffer buffer_;
  std::size_t direct_index_ = 0;
};

std::size_t peak_index(std::span<const double> x);

}  // namespace roomrelight::analysis
