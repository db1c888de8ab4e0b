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

#include <Eigen/Core>

#include "roomrelight/geo/energy.hpp"
#include "roomrelight/geo/path.hpp"

namespace roomrelight::opt {

/// Least-squares slope of y against t:
/// (n sum t y - sum t sum y) / (n sum t^2 - (sum t)^2).
///
/// Throws std::invalid_argument on mismatched sizes, fewer than two points
/// or when all t are equal.
double fit_slope(std::span<const double> t, std::span<const double> y);

/// Decay slope target for a reverberation time: -60 / t60 dB per second.
inline double target_slope(double t60) { return -60.0 / t60; }

/// Paths of one band prepared for repeated evaluation of the decay slope of
/// their dB energies as a function of the material reflectivities.
///
/// With y_i = 10 log10(e_i) and e_i from geo::path_energy, the slope is
/// m = sum_i c_i y_i with c_i = (n t_i - sum t) / (n sum t^2 - (sum t)^2),
/// and dm/drho_j = sum_i c_i (10 / ln 10) n_ij / rho_j.
class BandSlope {
 public:
  /// Throws std::invalid_argument when fewer than two distinct arrival
  /// times are present.
  BandSlope(std::span<const geo::PathRecord> paths, std::size_t n_materials, double gamma);

  [[nodiscard]] std::size_t num_paths() const { return static_cast<std::size_t>(times_.size()); }
  [[nodiscard]] std::size_t num_materials() const { return static_cast<std::size_t>(counts_.cols()); }

  /// y_i in dB for the given reflectivities.
  [[nodiscard]] Eigen::VectorXd energies_db(const Eigen::VectorXd& rho) const;
  [[nodiscard]] double slope(const Eigen::VectorXd& rho) const;
  /// dm/drho. Throws std::invalid_argument if any rho_j is not positive.
  [[nodiscard]] Eigen::VectorXd slope_gradient(const Eigen::VectorXd& rho) const;

 private:
  Eigen::VectorXd times_;
  Eigen::VectorXd base_db_;  ///< 10 log10(w exp(-gamma d) / (4 pi d^2))
  Eigen::MatrixXd counts_;   ///< paths x materials
  Eigen::VectorXd coeff_;    ///< c_i
};

/// Slope of the dB path energies against arrival time for all `paths` in
/// one band.
double slope_of_fit(std::span<const geo::PathRecord> paths, std::span<const geo::MaterialCoeffs> materials,
                    std::size_t band, const geo::AirModel& air);

}  // namespace roomrelight::opt
