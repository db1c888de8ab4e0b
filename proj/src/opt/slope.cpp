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

#include "roomrelight/opt/slope.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace roomrelight::opt {
namespace {

const double kDbPerNeper = 10.0 / std::numbers::ln10;

}  // namespace

double fit_slope(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_slope: t and y differ in length");
  if (t.size() < 2) throw std::invalid_argument("fit_slope: need at least two points");
  const auto n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double denom = n * stt - st * st;
  if (!(denom > 0.0)) throw std::invalid_argument("fit_slope: all arrival times are equal");
  return (n * sty - st * sy) / denom;
}

BandSlope::BandSlope(std::span<const geo::PathRecord> paths, std::size_t n_materials, double gamma) {
  const auto n = static_cast<Eigen::Index>(paths.size());
  times_.resize(n);
  base_db_.resize(n);
  counts_ = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(n_materials));
  const std::vector<double> unit(n_materials, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const geo::PathRecord& p = paths[static_cast<std::size_t>(i)];
    if (p.bounce_counts.size() != n_materials) throw std::invalid_argument("BandSlope: bounce counts do not match materials");
    times_[i] = p.arrival_time;
    base_db_[i] = 10.0 * std::log10(geo::path_energy(p, unit, gamma));
    for (std::size_t m = 0; m < n_materials; ++m) counts_(i, static_cast<Eigen::Index>(m)) = p.bounce_counts[m];
  }
  if (n < 2) throw std::invalid_argument("BandSlope: need at least two paths");
  // Centered form of (n t_i - sum t) / (n sum t^2 - (sum t)^2); identical
  // value, no cancellation when arrival times share a large offset.
  const double mean_t = times_.mean();
  const Eigen::VectorXd centered = times_.array() - mean_t;
  const double ss = centered.squaredNorm();
  if (!(ss > 1e-18 * std::max(1.0, mean_t * mean_t) * static_cast<double>(n))) {
    throw std::invalid_argument("BandSlope: all arrival times are equal, the slope is undefined");
  }
  coeff_ = centered / ss;
}

Eigen::VectorXd BandSlope::energies_db(const Eigen::VectorXd& rho) const {
  if (rho.size() != counts_.cols()) throw std::invalid_argument("BandSlope: wrong number of reflectivities");
  const Eigen::VectorXd log_rho_db = rho.array().log() * kDbPerNeper;
  return base_db_ + counts_ * log_rho_db;
}

double BandSlope::slope(const Eigen::VectorXd& rho) const {
  const Eigen::VectorXd y = energies_db(rho);
  return fit_slope({times_.data(), static_cast<std::size_t>(times_.size())},
                   {y.data(), static_cast<std::size_t>(y.size())});
}

Eigen::VectorXd BandSlope::slope_gradient(const Eigen::VectorXd& rho) const {
  if (rho.size() != counts_.cols()) throw std::invalid_argument("BandSlope: wrong number of reflectivities");
  if ((rho.array() <= 0.0).any()) throw std::invalid_argument("BandSlope: reflectivity must be positive for the gradient");
  // sum_i c_i n_ij, then the shared factor (10 / ln 10) / rho_j.
  const Eigen::VectorXd weighted = counts_.transpose() * coeff_;
  return (weighted.array() * kDbPerNeper / rho.array()).matrix();
}

double slope_of_fit(std::span<const geo::PathRecord> paths, std::span<const geo::MaterialCoeffs> materials,
                    std::size_t band, const geo::AirModel& air) {
  std::vector<double> t, y;
  t.reserve(paths.size());
  y.reserve(paths.size());
  const std::vector<double> rho = geo::band_reflectivity(materials, band);
  for (const auto& p : paths) {
    t.push_back(p.arrival_time);
    y.push_back(10.0 * std::log10(geo::path_energy(p, rho, air.gamma.at(band))));
  }
  return fit_slope(t, y);
}

}  // namespace roomrelight::opt
