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

#include "roomrelight/analysis/impulse_response.hpp"

#include <cmath>
#include <stdexcept>

namespace roomrelight::analysis {

std::size_t peak_index(std::span<const double> x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[best])) best = i;
  }
  return best;
}

ImpulseResponse::ImpulseResponse(dsp::AudioBuffer buffer) : buffer_(std::move(buffer)) {
  if (buffer_.empty()) throw std::invalid_argument("ImpulseResponse: empty buffer");
  if (!(buffer_.peak_abs() > 0.0)) throw std::invalid_argument("ImpulseResponse: all-zero buffer");
  direct_index_ = peak_index(buffer_.samples());
}

ImpulseResponse::ImpulseResponse(dsp::AudioBuffer buffer, std::size_t direct_index)
    : ImpulseResponse(std::move(buffer)) {
  if (direct_index >= buffer_.size()) throw std::invalid_argument("ImpulseResponse: direct index out of range");
  direct_index_ = direct_index;
}

}  // namespace roomrelight::analysis
