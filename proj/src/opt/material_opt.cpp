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

#include "roomrelight/opt/material_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <tbb/parallel_for.h>

#include "roomrelight/opt/slope.hpp"

namespace roomrelight::opt {
namespace {

constexpr double kWindowStart = 0.005;
constexpr double kWindowTargets = 1.5;

double earliest_arrival(std::span<const geo::PathRecord> paths) {
  double t0 = paths.front().arrival_time;
  for (const auto& p : paths) t0 = std::min(t0, p.arrival_time);
  return t0;
}

OptimizationResult solve(const OptimizationProblem& problem, const BandSlope& slope, double tol, int max_iter) {
  const double m_target = target_slope(problem.target_t60);
  const ObjectiveFn fn = [&](const Eigen::VectorXd& rho, Eigen::VectorXd& grad) {
    const double diff = slope.slope(rho) - m_target;
    grad = 2.0 * diff * slope.slope_gradient(rho);
    return diff * diff;
  };
  const auto n = static_cast<Eigen::Index>(problem.num_materials());
  BoxSolverOptions so;
  so.gtol = tol;
  so.ftol = tol * tol;
  so.max_iter = max_iter;
  const BoxSolverResult r = minimize_box(fn, problem.init, Eigen::VectorXd::Constant(n, problem.rho_min),
                                         Eigen::VectorXd::Constant(n, problem.rho_max), so);
  OptimizationResult out;
  out.rho = r.x;
  out.objective = r.f;
  out.iterations = r.iterations;
  out.trace = r.trace;
  out.converged = r.f < so.ftol || r.grad.cwiseAbs().maxCoeff() < tol;
  return out;
}

// Nearest band with a valid value; the higher one wins a tie.
std::size_t nearest_valid_band(const dsp::BandProfile& targets, std::size_t b) {
  const auto n = static_cast<std::ptrdiff_t>(targets.size());
  const auto bi = static_cast<std::ptrdiff_t>(b);
  for (std::ptrdiff_t d = 0; d < n; ++d) {
    for (std::ptrdiff_t c : {bi + d, bi - d}) {
      if (c >= 0 && c < n && targets.valid(static_cast<std::size_t>(c))) return static_cast<std::size_t>(c);
    }
  }
  throw std::invalid_argument("optimize_all_bands: no valid target band");
}

}  // namespace

void OptimizationProblem::validate() const {
  if (!(target_t60 > 0.0) || !std::isfinite(target_t60)) {
    throw std::invalid_argument(fmt::format("OptimizationProblem: target T60 must be positive, got {}", target_t60));
  }
  if (!(rho_min > 0.0 && rho_min < rho_max && rho_max <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("OptimizationProblem: bounds must satisfy 0 < min < max <= 1, got [{}, {}]", rho_min, rho_max));
  }
  if (init.size() == 0) throw std::invalid_argument("OptimizationProblem: no materials");
  if (!(gamma >= 0.0)) throw std::invalid_argument("OptimizationProblem: negative air attenuation");
  for (const auto& p : paths) {
    if (p.bounce_counts.size() != num_materials()) {
      throw std::invalid_argument("OptimizationProblem: path bounce counts do not match the material count");
    }
  }
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < paths.size() && distinct < 2; ++i) {
    if (i == 0 || paths[i].arrival_time != paths[0].arrival_time) ++distinct;
  }
  if (distinct < 2) {
    throw std::invalid_argument("OptimizationProblem: need at least two paths with distinct arrival times");
  }
}

std::vector<geo::PathRecord> fit_window(std::span<const geo::PathRecord> paths, double target_t60) {
  if (paths.empty()) return {};
  const double t0 = earliest_arrival(paths);
  const double lo = t0 + kWindowStart;
  const double hi = t0 + kWindowTargets * target_t60;
  std::vector<geo::PathRecord> out;
  for (const auto& p : paths) {
    if (p.arrival_time >= lo && p.arrival_time <= hi) out.push_back(p);
  }
  return out;
}

OptimizationProblem make_problem(std::span<const geo::PathRecord> paths, std::size_t n_materials,
                                 std::size_t band, double target_t60, double gamma, double init) {
  OptimizationProblem p;
  p.paths = fit_window(paths, target_t60);
  p.band = band;
  p.target_t60 = target_t60;
  p.gamma = gamma;
  p.init = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_materials), init);
  return p;
}

double objective(const OptimizationProblem& problem, const Eigen::VectorXd& rho) {
  const BandSlope slope(problem.paths, problem.num_materials(), problem.gamma);
  const double diff = slope.slope(rho) - target_slope(problem.target_t60);
  return diff * diff;
}

Eigen::VectorXd gradient(const OptimizationProblem& problem, const Eigen::VectorXd& rho) {
  const BandSlope slope(problem.paths, problem.num_materials(), problem.gamma);
  const double diff = slope.slope(rho) - target_slope(problem.target_t60);
  return 2.0 * diff * slope.slope_gradient(rho);
}

OptimizationResult optimize(const OptimizationProblem& problem, double tol, int max_iter) {
  problem.validate();
  const BandSlope slope(problem.paths, problem.num_materials(), problem.gamma);
  return solve(problem, slope, tol, max_iter);
}

std::vector<double> energy_histogram(std::span<const geo::PathRecord> paths, std::span<const double> rho,
                                     double gamma, double bin_s) {
  if (!(bin_s > 0.0)) throw std::invalid_argument("energy_histogram: bin width must be positive");
  double t_max = 0.0;
  for (const auto& p : paths) t_max = std::max(t_max, p.arrival_time);
  std::vector<double> hist(static_cast<std::size_t>(std::floor(t_max / bin_s)) + 1, 0.0);
  for (const auto& p : paths) {
    hist[static_cast<std::size_t>(std::floor(p.arrival_time / bin_s))] += geo::path_energy(p, rho, gamma);
  }
  return hist;
}

analysis::DecayFit envelope_decay(std::span<const geo::PathRecord> paths, std::span<const double> rho,
                                  double gamma, double bin_s) {
  if (paths.empty()) throw std::invalid_argument("envelope_decay: no paths");
  const std::vector<double> hist = energy_histogram(paths, rho, gamma, bin_s);
  const auto start = static_cast<std::size_t>(std::floor(earliest_arrival(paths) / bin_s));
  return analysis::fit_decay(hist, 1.0 / bin_s, start);
}

bool AllBandsResult::all_ok() const {
  return std::all_of(bands.begin(), bands.end(), [](const BandOptimization& b) { return b.ok; });
}

Eigen::MatrixXd AllBandsResult::rendering_rho() const {
  Eigen::MatrixXd out(rho.rows(), rho.cols() + 1);
  out.col(0) = rho.col(0);
  out.rightCols(rho.cols()) = rho;
  return out;
}

std::vector<geo::MaterialCoeffs> AllBandsResult::apply_to(std::span<const geo::MaterialCoeffs> materials) const {
  if (static_cast<Eigen::Index>(materials.size()) != rho.rows()) {
    throw std::invalid_argument("AllBandsResult::apply_to: material count differs from the fit");
  }
  std::vector<geo::MaterialCoeffs> out(materials.begin(), materials.end());
  for (std::size_t m = 0; m < out.size(); ++m) {
    for (Eigen::Index b = 0; b < rho.cols(); ++b) {
      out[m].reflectivity[static_cast<std::size_t>(b)] = rho(static_cast<Eigen::Index>(m), b);
    }
  }
  return out;
}

dsp::BandProfile inherit_invalid_targets(const dsp::BandProfile& targets) {
  if (!targets.any_valid()) throw std::invalid_argument("optimize_all_bands: no valid target band");
  dsp::BandProfile out = targets;
  for (std::size_t b = 0; b < targets.size(); ++b) {
    if (!targets.valid(b)) out.set(b, targets.value(nearest_valid_band(targets, b)), true);
  }
  return out;
}

AllBandsResult optimize_all_bands(std::span<const geo::PathRecord> paths, std::size_t n_materials,
                                  const dsp::BandProfile& targets, const MaterialOptOptions& options) {
  if (targets.bands().kind() != dsp::BandSetKind::kT60) {
    throw std::invalid_argument("optimize_all_bands: targets must be over the T60 bands");
  }
  if (n_materials == 0) throw std::invalid_argument("optimize_all_bands: no materials");
  options.air.validate();
  const dsp::BandProfile filled = inherit_invalid_targets(targets);
  const std::size_t n_bands = targets.size();

  AllBandsResult out;
  out.rho = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n_materials), static_cast<Eigen::Index>(n_bands),
                                      options.init);
  out.bands.resize(n_bands);

  tbb::parallel_for(std::size_t{0}, n_bands, [&](std::size_t b) {
    BandOptimization& st = out.bands[b];
    st.target_t60 = filled.value(b);
    st.inherited = !targets.valid(b);
    if (st.inherited) st.source_band = nearest_valid_band(targets, b);
    const double gamma = options.air.gamma.at(b);
    try {
      double fit_target = st.target_t60;
      for (int step = 0;; ++step) {
        // The path window follows the requested decay, not the rescaled one.
        OptimizationProblem problem = make_problem(paths, n_materials, b, st.target_t60, gamma, options.init);
        problem.target_t60 = fit_target;
        // Later steps start from the previous fit so the solution moves
        // continuously with the target instead of jumping between the many
        // reflectivity vectors that share one slope.
        if (step > 0) problem.init = st.result.rho;
        problem.rho_min = options.rho_min;
        problem.rho_max = options.rho_max;
        st.result = optimize(problem, options.tol, options.max_iter);
        st.fit_target_t60 = fit_target;
        st.calibration_steps = step;
        if (!options.calibrate_envelope) break;
        const std::vector<double> rho(st.result.rho.data(), st.result.rho.data() + st.result.rho.size());
        const analysis::DecayFit env = envelope_decay(paths, rho, gamma);
        st.envelope_t60 = env.valid ? env.t60 : 0.0;
        if (!env.valid) break;
        const double ratio = st.target_t60 / env.t60;
        if (std::abs(ratio - 1.0) < options.calibration_tolerance || step + 1 >= options.calibration_iterations) break;
        // Stop once the solution is pinned and the target cannot move it.
        if (!st.result.converged) break;
        fit_target *= ratio;
      }
      out.rho.col(static_cast<Eigen::Index>(b)) = st.result.rho;
      st.ok = true;
    } catch (const std::exception& e) {
      st.ok = false;
      st.error = e.what();
    }
  });
  return out;
}

}  // namespace roomrelight::opt
