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

#include "roomrelight/dsp/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace roomrelight::dsp {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n == 0) throw std::invalid_argument("RealFft: size must be positive");
  std::lock_guard lock(planner_mutex());
  plans_->real = fftw_alloc_real(n);
  plans_->spec = fftw_alloc_complex(n / 2 + 1);
  const int ni = static_cast<int>(n);
  plans_->fwd = fftw_plan_dft_r2c_1d(ni, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_dft_c2r_1d(ni, plans_->spec, plans_->real, FFTW_ESTIMATE);
  if (!plans_->fwd || !plans_->inv) throw std::runtime_error("RealFft: FFTW planning failed");
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::vector<std::complex<double>> RealFft::forward(std::span<const double> in) const {
  const std::size_t m = std::min(in.size(), n_);
  std::copy_n(in.begin(), m, plans_->real);
  std::fill(plans_->real + m, plans_->real + n_, 0.0);
  fftw_execute_dft_r2c(plans_->fwd, plans_->real, plans_->spec);
  std::vector<std::complex<double>> out(bins());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {plans_->spec[k][0], plans_->spec[k][1]};
  return out;
}

std::vector<double> RealFft::inverse(std::span<const std::complex<double>> in) const {
  if (in.size() != bins()) throw std::invalid_argument("RealFft::inverse: wrong number of bins");
  for (std::size_t k = 0; k < in.size(); ++k) {
    plans_->spec[k][0] = in[k].real();
    plans_->spec[k][1] = in[k].imag();
  }
  // c2r destroys its input; the buffer is scratch so that is fine.
  fftw_execute_dft_c2r(plans_->inv, plans_->spec, plans_->real);
  std::vector<double> out(plans_->real, plans_->real + n_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace roomrelight::dsp
