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

#include "roomrelight/opt/lbfgsb.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace roomrelight::opt {
namespace {

using Eigen::VectorXd;

VectorXd project(const VectorXd& x, const VectorXd& lo, const VectorXd& hi) { return x.cwiseMax(lo).cwiseMin(hi); }

// Zeroes gradient components that point out of the box at an active bound.
VectorXd projected_gradient(const VectorXd& x, const VectorXd& g, const VectorXd& lo, const VectorXd& hi) {
  VectorXd pg = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= hi[i] && g[i] < 0.0)) pg[i] = 0.0;
  }
  return pg;
}

struct Pair {
  VectorXd s, y;
  double rho;
};

// Two-loop recursion applied to q, restricted to the `free` mask.
VectorXd two_loop(const std::deque<Pair>& memory, VectorXd q, const VectorXd& free) {
  std::vector<double> alpha(memory.size());
  for (std::size_t k = memory.size(); k-- > 0;) {
    const Pair& p = memory[k];
    alpha[k] = p.rho * p.s.cwiseProduct(free).dot(q);
    q -= alpha[k] * p.y.cwiseProduct(free);
  }
  if (!memory.empty()) {
    const Pair& last = memory.back();
    const double yy = last.y.cwiseProduct(free).squaredNorm();
    const double sy = last.s.cwiseProduct(free).dot(last.y);
    if (yy > 0.0 && sy > 0.0) q *= sy / yy;
  }
  for (std::size_t k = 0; k < memory.size(); ++k) {
    const Pair& p = memory[k];
    const double beta = p.rho * p.y.cwiseProduct(free).dot(q);
    q += (alpha[k] - beta) * p.s.cwiseProduct(free);
  }
  return q.cwiseProduct(free);
}

}  // namespace

BoxSolverResult minimize_box(const ObjectiveFn& fn, const VectorXd& x0, const VectorXd& lo, const VectorXd& hi,
                             const BoxSolverOptions& opt) {
  const Eigen::Index n = x0.size();
  if (lo.size() != n || hi.size() != n) throw std::invalid_argument("minimize_box: bound sizes differ from x0");
  if ((lo.array() > hi.array()).any()) throw std::invalid_argument("minimize_box: lower bound above upper bound");
  if (opt.memory < 1 || opt.max_iter < 0) throw std::invalid_argument("minimize_box: bad options");

  BoxSolverResult res;
  res.x = project(x0, lo, hi);
  res.grad.resize(n);
  res.f = fn(res.x, res.grad);
  if (!std::isfinite(res.f) || !res.grad.allFinite()) {
    throw std::runtime_error("minimize_box: objective or gradient is not finite at the initial point");
  }
  res.trace.push_back({res.f, res.grad.cwiseAbs().maxCoeff()});

  std::deque<Pair> memory;
  VectorXd g_new(n);
  for (;;) {
    const VectorXd pg = projected_gradient(res.x, res.grad, lo, hi);
    if (res.f < opt.ftol) {
      res.reason = StopReason::kObjective;
      break;
    }
    if (pg.cwiseAbs().maxCoeff() < opt.gtol) {
      res.reason = StopReason::kGradient;
      break;
    }
    if (res.iterations >= opt.max_iter) {
      res.reason = StopReason::kMaxIterations;
      break;
    }

    VectorXd free = VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (pg[i] == 0.0) free[i] = 0.0;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      VectorXd d = -two_loop(memory, pg, free);
      double slope = pg.dot(d);
      if (memory.empty() || !(slope < -1e-12 * pg.norm() * d.norm())) {
        memory.clear();
        // Unit-length first step, the usual L-BFGS start.
        d = -pg / std::max(pg.norm(), 1e-300);
        slope = pg.dot(d);
      }
      double step = 1.0;
      for (int bt = 0; bt < opt.max_backtracks; ++bt, step *= 0.5) {
        const VectorXd x_new = project(res.x + step * d, lo, hi);
        const VectorXd dx = x_new - res.x;
        if (dx.cwiseAbs().maxCoeff() == 0.0) break;
        const double f_new = fn(x_new, g_new);
        if (!std::isfinite(f_new) || !g_new.allFinite()) continue;
        if (f_new <= res.f + opt.armijo * res.grad.dot(dx)) {
          const VectorXd dg = g_new - res.grad;
          const double sy = dx.dot(dg);
          if (sy > 1e-12 * dx.norm() * dg.norm()) {
            memory.push_back({dx, dg, 1.0 / sy});
            if (static_cast<int>(memory.size()) > opt.memory) memory.pop_front();
          }
          res.x = x_new;
          res.f = f_new;
          res.grad = g_new;
          accepted = true;
          break;
        }
      }
      if (!accepted) memory.clear();  // retry once from steepest descent
    }
    if (!accepted) {
      res.reason = StopReason::kNoProgress;
      break;
    }
    ++res.iterations;
    res.trace.push_back({res.f, res.grad.cwiseAbs().maxCoeff()});
  }
  return res;
}

}  // namespace roomrelight::opt
