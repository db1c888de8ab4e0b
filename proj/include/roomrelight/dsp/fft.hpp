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

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace roomrelight::dsp {

/// Real-input FFT of a fixed size, backed by FFTW.
///
/// Plans are created with FFTW_ESTIMATE so results are reproducible run to
/// run. Construction is serialized internally; execution is thread-safe as
/// long as each thread owns its RealFft.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t bins() const { return n_ / 2 + 1; }

  /// Zero-pads (or truncates) `in` to size() and returns bins() coefficients.
  [[nodiscard]] std::vector<std::complex<double>> forward(std::span<const double> in) const;
  /// Inverse transform normalized by 1/size(), so inverse(forward(x)) == x.
  [[nodiscard]] std::vector<double> inverse(std::span<const std::complex<double>> in) const;

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

std::size_t next_pow2(std::size_t n);

}  // namespace roomrelight::dsp
