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

#include "roomrelight/dsp/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace roomrelight::dsp {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

cplx bilinear(cplx s, double fs) { return (2.0 * fs + s) / (2.0 * fs - s); }

// Analog Butterworth prototype poles (unit cutoff, left half plane).
std::vector<cplx> prototype_poles(int order) {
  std::vector<cplx> poles;
  for (int k = 1; k <= order; ++k) {
    const double theta = kPi * (2.0 * k + order - 1) / (2.0 * order);
    poles.push_back(std::polar(1.0, theta));
  }
  return poles;
}

cplx cascade_response(std::span<const Biquad> sections, double omega) {
  const cplx z1 = std::polar(1.0, -omega);
  const cplx z2 = z1 * z1;
  cplx h = 1.0;
  for (const Biquad& s : sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

// Keeps the upper-half-plane member of each conjugate pair.
std::vector<cplx> upper_poles(const std::vector<cplx>& poles) {
  std::vector<cplx> out;
  for (const cplx& p : poles) {
    if (p.imag() > 0.0) out.push_back(p);
  }
  return out;
}

void normalize_gain(std::vector<Biquad>& sections, double omega) {
  const double mag = std::abs(cascade_response(sections, omega));
  const double per_section = std::pow(1.0 / mag, 1.0 / static_cast<double>(sections.size()));
  for (Biquad& s : sections) {
    s.b0 *= per_section;
    s.b1 *= per_section;
    s.b2 *= per_section;
  }
}

std::vector<Biquad> design_bandpass(double lo_hz, double hi_hz, int order, double fs) {
  const double wl = 2.0 * fs * std::tan(kPi * lo_hz / fs);
  const double wh = 2.0 * fs * std::tan(kPi * hi_hz / fs);
  const double w0 = std::sqrt(wl * wh);
  const double bw = wh - wl;

  std::vector<cplx> digital;
  for (const cplx& p : prototype_poles(order)) {
    const cplx half = p * bw / 2.0;
    const cplx root = std::sqrt(half * half - w0 * w0);
    digital.push_back(bilinear(half + root, fs));
    digital.push_back(bilinear(half - root, fs));
  }
  std::vector<Biquad> sections;
  for (const cplx& z : upper_poles(digital)) {
    // Zeros at z = +1 and z = -1 per section.
    sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
  }
  if (sections.size() != static_cast<std::size_t>(order)) {
    throw std::logic_error("design_bandpass: unexpected real poles");
  }
  const double center_omega = 2.0 * std::atan(w0 / (2.0 * fs));
  normalize_gain(sections, center_omega);
  return sections;
}

std::vector<Biquad> design_highpass(double cutoff_hz, int order, double fs) {
  const double wc = 2.0 * fs * std::tan(kPi * cutoff_hz / fs);
  std::vector<cplx> digital;
  for (const cplx& p : prototype_poles(order)) digital.push_back(bilinear(wc / p, fs));
  std::vector<Biquad> sections;
  for (const cplx& z : upper_poles(digital)) {
    sections.push_back({1.0, -2.0, 1.0, -2.0 * z.real(), std::norm(z)});
  }
  normalize_gain(sections, kPi);
  return sections;
}

}  // namespace

void filter_sections(std::span<const Biquad> sections, std::span<double> data) {
  for (const Biquad& s : sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : data) {
      const double x = v;
      const double y = s.b0 * x + z1;
      z1 = s.b1 * x - s.a1 * y + z2;
      z2 = s.b2 * x - s.a2 * y;
      v = y;
    }
  }
}

OctaveFilterbank::OctaveFilterbank(std::span<const double> centers, int sample_rate, int order)
    : sample_rate_(sample_rate) {
  if (sample_rate <= 0) throw std::invalid_argument("OctaveFilterbank: sample rate must be positive");
  if (order < 2 || order % 2 != 0) {
    throw std::invalid_argument("OctaveFilterbank: order must be even and >= 2");
  }
  if (centers.empty()) throw std::invalid_argument("OctaveFilterbank: no bands");
  const double fs = sample_rate;
  const double nyquist = fs / 2.0;
  for (std::size_t b = 0; b < centers.size(); ++b) {
    const double c = centers[b];
    if (!(c > 0.0) || (b > 0 && c <= centers[b - 1])) {
      throw std::invalid_argument("OctaveFilterbank: band centers must be positive and strictly increasing");
    }
    const double lo = octave_lower_edge(c);
    const double hi = octave_upper_edge(c);
    const bool top = b + 1 == centers.size();
    if (lo >= nyquist || (!top && hi >= nyquist)) {
      throw std::invalid_argument(fmt::format(
          "OctaveFilterbank: band centered at {} Hz lies above the Nyquist frequency ({} Hz)", c, nyquist));
    }
    Band band;
    band.center = c;
    double bandwidth = 0.0;
    if (hi >= nyquist) {
      band.highpass = true;
      band.sections = design_highpass(lo, order, fs);
      bandwidth = nyquist - lo;
    } else {
      band.sections = design_bandpass(lo, hi, order, fs);
      bandwidth = hi - lo;
    }
    // Long enough for the slowest pole's ringing to fall far below double precision.
    band.pad = static_cast<std::size_t>(std::ceil(20.0 * fs / bandwidth)) + 16;
    bands_.push_back(std::move(band));
  }
}

AudioBuffer OctaveFilterbank::apply_band(const AudioBuffer& x, std::size_t b) const {
  if (x.sample_rate() != sample_rate_) {
    throw std::invalid_argument(fmt::format("OctaveFilterbank: designed for {} Hz, got {} Hz input",
                                            sample_rate_, x.sample_rate()));
  }
  const Band& band = bands_.at(b);
  const std::size_t n = x.size();
  std::vector<double> work(n + 2 * band.pad, 0.0);
  std::copy(x.samples().begin(), x.samples().end(), work.begin() + static_cast<std::ptrdiff_t>(band.pad));
  filter_sections(band.sections, work);
  std::reverse(work.begin(), work.end());
  filter_sections(band.sections, work);
  std::reverse(work.begin(), work.end());
  std::vector<double> out(work.begin() + static_cast<std::ptrdiff_t>(band.pad),
                          work.begin() + static_cast<std::ptrdiff_t>(band.pad + n));
  return AudioBuffer(std::move(out), sample_rate_);
}

std::vector<AudioBuffer> OctaveFilterbank::apply(const AudioBuffer& x) const {
  std::vector<AudioBuffer> out;
  out.reserve(bands_.size());
  for (std::size_t b = 0; b < bands_.size(); ++b) out.push_back(apply_band(x, b));
  return out;
}

std::complex<double> OctaveFilterbank::response(std::size_t b, double freq_hz) const {
  return cascade_response(bands_.at(b).sections, 2.0 * kPi * freq_hz / sample_rate_);
}

std::vector<AudioBuffer> octave_filterbank(const AudioBuffer& x, const BandSet& bands) {
  return OctaveFilterbank(bands, x.sample_rate()).apply(x);
}

}  // namespace roomrelight::dsp
