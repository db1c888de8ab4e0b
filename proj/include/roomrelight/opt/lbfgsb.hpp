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

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace roomrelight::opt {

/// f(x) returning the value and writing the gradient into `grad`.
using ObjectiveFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct BoxSolverOptions {
  int memory = 10;
  double gtol = 1e-6;    ///< stop when the projected gradient's max-norm is below this
  double ftol = 0.0;     ///< stop when f drops below this
  int max_iter = 500;
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct IterationRecord {
  double f = 0.0;
  double grad_max = 0.0;  ///< max |df/dx_i|, unprojected
};

enum class StopReason { kGradient, kObjective, kMaxIterations, kNoProgress };

struct BoxSolverResult {
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
  double f = 0.0;
  int iterations = 0;
  StopReason reason = StopReason::kMaxIterations;
  std::vector<IterationRecord> trace;  ///< entry 0 is the start point
};

/// Projected limited-memory BFGS for min f(x) subject to lo <= x <= hi.
///
/// Variables held at a bound by the gradient are frozen for the step; the
/// two-loop recursion runs over the remaining ones and the step is found by
/// Armijo backtracking along the projected path. Memory is dropped whenever
/// the quasi-Newton direction fails to descend. Every accepted iterate has
/// f no larger than its predecessor.
///
/// Throws std::invalid_argument on inconsistent sizes or bounds and
/// std::runtime_error if f or its gradient is not finite at the start.
BoxSolverResult minimize_box(const ObjectiveFn& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi, const BoxSolverOptions& options = {});

}  // namespace roomrelight::opt
