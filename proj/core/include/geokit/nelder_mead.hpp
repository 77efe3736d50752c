// Copyright 2026 The GeoKit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace geokit {

struct NelderMeadOptions {
  int max_iters = 400;
  // Stop when (f_worst - f_best) <= tol * |f_best|.
  double tol = 1e-8;
  // Per-coordinate initial simplex offsets; `initial_step` when empty.
  std::vector<double> steps;
  double initial_step = 0.05;
  // Dimension-dependent coefficients (Gao & Han) instead of 1, 2, 0.5, 0.5.
  bool adaptive = true;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free minimization. The objective may return +inf for
// infeasible points; the start must be feasible.
NelderMeadResult nelder_mead_minimize(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const NelderMeadOptions& options);

}  // namespace geokit
