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

#include "roomrelight/dsp/audio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace roomrelight::dsp {

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw std::invalid_argument("AudioBuffer: sample rate must be positive, got " +
                                std::to_string(sample_rate_));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw std::invalid_argument("AudioBuffer: non-finite sample at index " + std::to_string(i));
    }
  }
}

AudioBuffer AudioBuffer::zeros(std::size_t length, int sample_rate) {
  return AudioBuffer(std::vector<double>(length, 0.0), sample_rate);
}

double AudioBuffer::duration_seconds() const {
  return static_cast<double>(samples_.size()) / sample_rate_;
}

double AudioBuffer::energy() const {
  double e = 0.0;
  for (double s : samples_) e += s * s;
  return e;
}

double AudioBuffer::peak_abs() const {
  double p = 0.0;
  for (double s : samples_) p = std::max(p, std::abs(s));
  return p;
}

AudioBuffer AudioBuffer::scaled(double gain) const {
  std::vector<double> out(samples_);
  for (double& s : out) s *= gain;
  return AudioBuffer(std::move(out), sample_rate_);
}

AudioBuffer AudioBuffer::segment(std::size_t begin, std::size_t length) const {
  std::vector<double> out(length, 0.0);
  for (std::size_t i = 0; i < length && begin + i < samples_.size(); ++i) {
    out[i] = samples_[begin + i];
  }
  return AudioBuffer(std::move(out), sample_rate_);
}

AudioBuffer mix(const AudioBuffer& a, const AudioBuffer& b) {
  if (a.sample_rate() != b.sample_rate()) {
    throw std::invalid_argument("mix: sample-rate mismatch");
  }
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return AudioBuffer(std::move(out), a.sample_rate());
}

AudioBuffer delay(const AudioBuffer& x, std::size_t samples) {
  std::vector<double> out(x.size() + samples, 0.0);
  std::copy(x.samples().begin(), x.samples().end(), out.begin() + static_cast<std::ptrdiff_t>(samples));
  return AudioBuffer(std::move(out), x.sample_rate());
}

}  // namespace roomrelight::dsp
