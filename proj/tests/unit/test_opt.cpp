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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "roomrelight/geo/energy.hpp"
#include "roomrelight/geo/image_source.hpp"
#include "roomrelight/opt/lbfgsb.hpp"
#include "roomrelight/opt/material_opt.hpp"
#include "roomrelight/opt/slope.hpp"

using namespace roomrelight;
using Eigen::VectorXd;

namespace {

std::vector<geo::MaterialCoeffs> uniform_materials(std::size_t n, double rho) {
  std::vector<geo::MaterialCoeffs> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i].name = "m" + std::to_string(i);
    m[i].reflectivity.fill(rho);
  }
  return m;
}

std::vector<geo::PathRecord> shoebox_paths(const geo::Vec3& dims, std::size_t n_materials, int order) {
  std::array<std::size_t, 6> walls{};
  for (std::size_t w = 0; w < 6; ++w) walls[w] = w % n_materials;
  const geo::RoomModel room = geo::RoomModel::shoebox(dims, walls, uniform_materials(n_materials, 0.8));
  return geo::trace_image_source(room, {0.3 * dims.x(), 0.35 * dims.y(), 0.45 * dims.z()},
                                 {0.7 * dims.x(), 0.6 * dims.y(), 0.5 * dims.z()}, order);
}

geo::PathRecord record(double t, double weight, std::vector<std::uint16_t> counts) {
  geo::PathRecord p;
  p.arrival_time = t;
  p.distance = t * geo::kSpeedOfSound;
  p.weight = weight;
  p.order = 0;
  for (auto c : counts) p.order += c;
  p.bounce_counts = std::move(counts);
  return p;
}

}  // namespace

TEST_CASE("least-squares slope") {
  SUBCASE("points on an exact line") {
    std::vector<double> t, y;
    for (int i = 0; i < 50; ++i) {
      t.push_back(0.01 * i + 0.003);
      y.push_back(-120.0 * t.back() + 17.0);
    }
    CHECK(std::abs(opt::fit_slope(t, y) + 120.0) < 1e-9);
  }

  SUBCASE("matches the 2x2 normal equations") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> t(40), y(40);
      for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = u(rng);
        y[i] = -80.0 * t[i] + 10.0 * u(rng);
      }
      Eigen::Matrix2d a;
      Eigen::Vector2d b;
      a << static_cast<double>(t.size()), 0, 0, 0;
      b.setZero();
      for (std::size_t i = 0; i < t.size(); ++i) {
        a(0, 1) += t[i];
        a(1, 1) += t[i] * t[i];
        b(0) += y[i];
        b(1) += t[i] * y[i];
      }
      a(1, 0) = a(0, 1);
      const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(b);
      CHECK(opt::fit_slope(t, y) == doctest::Approx(sol(1)).epsilon(1e-9));
    }
  }

  SUBCASE("degenerate input") {
    const std::vector<double> one{1.0}, same{0.5, 0.5, 0.5}, y3{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(opt::fit_slope(one, one), std::invalid_argument);
    CHECK_THROWS_AS(opt::fit_slope(same, y3), std::invalid_argument);
    CHECK_THROWS_AS(opt::fit_slope(y3, one), std::invalid_argument);
  }

  SUBCASE("a constant energy scale does not move the slope") {
    auto paths = shoebox_paths({5, 4, 3}, 3, 8);
    const auto mats = uniform_materials(3, 0.7);
    const double base = opt::slope_of_fit(paths, mats, 2, geo::AirModel::standard());
    for (auto& p : paths) p.weight *= 1e-4;
    CHECK(opt::slope_of_fit(paths, mats, 2, geo::AirModel::standard()) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("slope objective and gradient") {
  const auto paths = shoebox_paths({6, 5, 3.2}, 4, 10);
  opt::OptimizationProblem p = opt::make_problem(paths, 4, 3, 0.5, 0.001);

  SUBCASE("target 0.5 s is -120 dB/s") { CHECK(opt::target_slope(0.5) == -120.0); }

  SUBCASE("objective is never negative") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.02, 0.999);
    for (int i = 0; i < 1000; ++i) {
      VectorXd rho(4);
      for (Eigen::Index j = 0; j < 4; ++j) rho[j] = u(rng);
      REQUIRE(opt::objective(p, rho) >= 0.0);
    }
  }

  SUBCASE("zero at a matching target, with zero gradient") {
    const VectorXd rho = VectorXd::Constant(4, 0.75);
    const opt::BandSlope bs(p.paths, 4, p.gamma);
    p.target_t60 = -60.0 / bs.slope(rho);
    CHECK(opt::objective(p, rho) < 1e-20);
    CHECK(opt::gradient(p, rho).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("central differences agree with the analytic gradient") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.1, 0.95);
    for (int trial = 0; trial < 10; ++trial) {
      VectorXd rho(4);
      for (Eigen::Index j = 0; j < 4; ++j) rho[j] = u(rng);
      const VectorXd g = opt::gradient(p, rho);
      for (Eigen::Index j = 0; j < 4; ++j) {
        const double h = 1e-6;
        VectorXd a = rho, b = rho;
        a[j] += h;
        b[j] -= h;
        const double fd = (opt::objective(p, a) - opt::objective(p, b)) / (2 * h);
        CHECK(std::abs(g[j] - fd) / (1.0 + std::abs(g[j])) < 1e-5);
      }
    }
  }

  SUBCASE("a material nobody hits has zero gradient") {
    std::vector<geo::PathRecord> recs;
    for (int i = 0; i < 30; ++i) {
      recs.push_back(record(0.01 + 0.01 * i, 1.0, {static_cast<std::uint16_t>(i % 5), 0}));
    }
    opt::OptimizationProblem q = opt::make_problem(recs, 2, 0, 0.3, 0.0);
    const VectorXd g = opt::gradient(q, VectorXd::Constant(2, 0.6));
    CHECK(g[1] == 0.0);
    CHECK(g[0] != 0.0);
  }

  SUBCASE("invalid problems") {
    opt::OptimizationProblem bad = p;
    bad.target_t60 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.rho_min = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    const auto lone = opt::make_problem(std::vector<geo::PathRecord>{record(0.1, 1.0, {1})}, 1, 0, 0.5, 0.0);
    CHECK_THROWS_AS(opt::optimize(lone), std::invalid_argument);
  }
}

TEST_CASE("box-constrained quasi-Newton solver") {
  // Rosenbrock restricted to x0 <= 0.5: the constrained minimum is (0.5, 0.25).
  const opt::ObjectiveFn rosen = [](const VectorXd& x, VectorXd& g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g.resize(2);
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  VectorXd lo(2), hi(2), x0(2);
  lo << -2.0, -2.0;
  hi << 0.5, 2.0;
  x0 << -1.2, 1.0;
  opt::BoxSolverOptions o;
  o.gtol = 1e-10;
  o.max_iter = 2000;
  const opt::BoxSolverResult r = opt::minimize_box(rosen, x0, lo, hi, o);
  CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations) + 1);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].f <= r.trace[i - 1].f);
}

TEST_CASE("material optimization") {
  const auto paths = shoebox_paths({4, 6, 3}, 6, 12);

  SUBCASE("six materials, target 0.6 s") {
    const opt::OptimizationProblem p = opt::make_problem(paths, 6, 3, 0.6, 0.001, 0.9);
    const opt::OptimizationResult r = opt::optimize(p, 1e-6, 500);
    CHECK(r.converged);
    CHECK(r.objective < 1e-4);
    CHECK(r.iterations <= 200);
    CHECK(r.rho.minCoeff() >= p.rho_min);
    CHECK(r.rho.maxCoeff() <= p.rho_max);
  }

  SUBCASE("starting at the optimum") {
    opt::OptimizationProblem p = opt::make_problem(paths, 6, 3, 0.6, 0.001, 0.8);
    p.target_t60 = -60.0 / opt::BandSlope(p.paths, 6, p.gamma).slope(p.init);
    const opt::OptimizationResult r = opt::optimize(p);
    CHECK(r.iterations <= 1);
    CHECK((r.rho - p.init).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("unreachable target saturates at the upper bound") {
    const auto tiny = shoebox_paths({2, 2, 2}, 1, 10);
    opt::OptimizationProblem p = opt::make_problem(tiny, 1, 3, 10.0, 0.001, 0.5);
    p.rho_max = 0.95;
    const opt::OptimizationResult r = opt::optimize(p);
    CHECK_FALSE(r.converged);
    CHECK(r.rho[0] == doctest::Approx(0.95));
  }
}

TEST_CASE("all-band optimization") {
  const auto paths = shoebox_paths({5, 4, 3}, 3, 20);
  opt::MaterialOptOptions o;
  o.air = geo::AirModel::none();

  SUBCASE("identical subproblems give identical reflectivities") {
    const opt::AllBandsResult r =
        opt::optimize_all_bands(paths, 3, dsp::BandProfile::uniform(dsp::BandSet::t60(), 0.5), o);
    REQUIRE(r.all_ok());
    for (Eigen::Index b = 1; b < r.rho.cols(); ++b) CHECK((r.rho.col(b) - r.rho.col(0)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(r.rendering_rho().cols() == 8);
    CHECK((r.rendering_rho().col(0) - r.rho.col(0)).norm() == 0.0);
  }

  SUBCASE("an invalid 125 Hz target inherits from 250 Hz") {
    dsp::BandProfile t(dsp::BandSet::t60(), {0.0, 0.7, 0.6, 0.5, 0.45, 0.4, 0.3},
                       {false, true, true, true, true, true, true});
    const dsp::BandProfile filled = opt::inherit_invalid_targets(t);
    CHECK(filled.valid(0));
    CHECK(filled.value(0) == 0.7);
    const opt::AllBandsResult r = opt::optimize_all_bands(paths, 3, t, o);
    CHECK(r.bands[0].inherited);
    CHECK(r.bands[0].source_band == 1u);
    CHECK(r.bands[0].target_t60 == 0.7);
  }

  SUBCASE("no valid target at all") {
    dsp::BandProfile none(dsp::BandSet::t60(), std::vector<double>(7, 0.0), std::vector<bool>(7, false));
    CHECK_THROWS_AS(opt::inherit_invalid_targets(none), std::invalid_argument);
  }
}
