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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "roomrelight/analysis/decay.hpp"
#include "roomrelight/dsp/bands.hpp"
#include "roomrelight/geo/energy.hpp"
#include "roomrelight/geo/path.hpp"
#include "roomrelight/geo/room.hpp"
#include "roomrelight/opt/lbfgsb.hpp"

namespace roomrelight::opt {

inline constexpr double kDefaultRhoMin = 0.02;
inline constexpr double kDefaultRhoMax = 0.999;
inline constexpr double kDefaultRhoInit = 0.9;

/// Slope-matching problem for a single band.
struct OptimizationProblem {
  std::vector<geo::PathRecord> paths;
  std::size_t band = 0;
  double target_t60 = 0.5;
  double gamma = 0.0;  ///< air attenuation of the band, nepers per meter
  double rho_min = kDefaultRhoMin;
  double rho_max = kDefaultRhoMax;
  Eigen::VectorXd init;  ///< one reflectivity per material

  [[nodiscard]] std::size_t num_materials() const { return static_cast<std::size_t>(init.size()); }
  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

struct OptimizationResult {
  Eigen::VectorXd rho;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> trace;
};

/// Paths whose arrival falls in [t0 + 5 ms, t0 + 1.5 target_t60], t0 being
/// the earliest arrival.
std::vector<geo::PathRecord> fit_window(std::span<const geo::PathRecord> paths, double target_t60);

/// Problem over the fit window of `paths` with every material starting at
/// `init`.
OptimizationProblem make_problem(std::span<const geo::PathRecord> paths, std::size_t n_materials,
                                 std::size_t band, double target_t60, double gamma,
                                 double init = kDefaultRhoInit);

/// J = (m - m')^2 with m' = -60 / target_t60.
double objective(const OptimizationProblem& problem, const Eigen::VectorXd& rho);
/// dJ/drho. Throws std::invalid_argument if any rho_j is not positive.
Eigen::VectorXd gradient(const OptimizationProblem& problem, const Eigen::VectorXd& rho);

/// Box-constrained L-BFGS from problem.init. Stops once |grad|_inf < tol,
/// J < tol^2 or after max_iter iterations. `converged` is false when the
/// solver stopped on a bound with the unconstrained gradient still large.
OptimizationResult optimize(const OptimizationProblem& problem, double tol = 1e-6, int max_iter = 500);

/// Path energies binned on a regular grid (default 1 ms), starting at t = 0.
std::vector<double> energy_histogram(std::span<const geo::PathRecord> paths, std::span<const double> rho,
                                     double gamma, double bin_s = 1e-3);

/// Schroeder decay fit of the binned path energies, the time-domain
/// counterpart of what an analyzer measures on the rendered response.
analysis::DecayFit envelope_decay(std::span<const geo::PathRecord> paths, std::span<const double> rho,
                                  double gamma, double bin_s = 1e-3);

struct MaterialOptOptions {
  double tol = 1e-6;
  int max_iter = 500;
  double rho_min = kDefaultRhoMin;
  double rho_max = kDefaultRhoMax;
  double init = kDefaultRhoInit;
  geo::AirModel air = geo::AirModel::standard();
  /// Rescale the slope target until the binned energy envelope decays at
  /// the requested T60. The line fitted through individual path energies
  /// is dominated by the sparse early reflections and reads shorter than
  /// the envelope a listener hears.
  bool calibrate_envelope = true;
  int calibration_iterations = 6;
  double calibration_tolerance = 0.01;
};

struct BandOptimization {
  double target_t60 = 0.0;       ///< after mask inheritance
  bool inherited = false;        ///< target copied from a neighbouring band
  std::optional<std::size_t> source_band;
  double fit_target_t60 = 0.0;   ///< slope target actually handed to the solver
  double envelope_t60 = 0.0;     ///< 0 when the envelope fit was not usable
  int calibration_steps = 0;
  OptimizationResult result;
  bool ok = false;
  std::string error;
};

struct AllBandsResult {
  /// n_materials x 7, one column per T60 band.
  Eigen::MatrixXd rho;
  std::vector<BandOptimization> bands;

  [[nodiscard]] bool all_ok() const;
  /// n_materials x 8: a 62.5 Hz column copied from 125 Hz, then the T60 bands.
  [[nodiscard]] Eigen::MatrixXd rendering_rho() const;
  /// Copies of `materials` carrying the fitted reflectivities.
  [[nodiscard]] std::vector<geo::MaterialCoeffs> apply_to(std::span<const geo::MaterialCoeffs> materials) const;
};

/// Targets with invalid bands replaced by the nearest valid band (the
/// higher one on ties). Throws std::invalid_argument if no band is valid.
dsp::BandProfile inherit_invalid_targets(const dsp::BandProfile& targets);

/// Fits all seven bands independently from one shared set of paths. A band
/// whose solve throws is reported in its status, keeps the initial
/// reflectivity and does not stop the others.
AllBandsResult optimize_all_bands(std::span<const geo::PathRecord> paths, std::size_t n_materials,
                                  const dsp::BandProfile& targets, const MaterialOptOptions& options = {});

}  // namespace roomrelight::opt
