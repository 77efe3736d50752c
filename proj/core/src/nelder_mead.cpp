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

#include "geokit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace geokit {

NelderMeadResult nelder_mead_minimize(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const NelderMeadOptions& options) {
  const int d = static_cast<int>(start.size());
  if (d == 0) throw std::invalid_argument("empty parameter vector");

  NelderMeadResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    double v = objective(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  double alpha = 1.0, beta = 2.0, gamma = 0.5, delta = 0.5;
  if (options.adaptive && d > 1) {
    beta = 1.0 + 2.0 / d;
    gamma = 0.75 - 0.5 / d;
    delta = 1.0 - 1.0 / d;
  }

  std::vector<Eigen::VectorXd> simplex(d + 1, start);
  std::vector<double> values(d + 1);
  values[0] = eval(start);
  if (!std::isfinite(values[0])) {
    throw std::invalid_argument("Nelder-Mead start is infeasible");
  }
  for (int i = 0; i < d; ++i) {
    double step = options.steps.empty() ? options.initial_step
                                        : options.steps[i];
    simplex[i + 1][i] += step;
    values[i + 1] = eval(simplex[i + 1]);
    // Pull infeasible vertices back toward the start.
    for (int tries = 0; !std::isfinite(values[i + 1]) && tries < 30; ++tries) {
      step *= 0.5;
      simplex[i + 1][i] = start[i] + step;
      values[i + 1] = eval(simplex[i + 1]);
    }
  }

  std::vector<int> order(d + 1);
  Eigen::VectorXd centroid(d);
  int iter = 0;
  for (; iter < options.max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[d - 1];

    const double spread = values[worst] - values[best];
    if (std::isfinite(spread) &&
        spread <= options.tol * std::max(std::abs(values[best]), 1e-300)) {
      result.converged = true;
      break;
    }

    centroid.setZero();
    for (int i = 0; i <= d; ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= d;

    Eigen::VectorXd xr = centroid + alpha * (centroid - simplex[worst]);
    double fr = eval(xr);
    if (fr < values[best]) {
      Eigen::VectorXd xe = centroid + beta * (xr - centroid);
      double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    bool outside = fr < values[worst];
    Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                : Eigen::VectorXd(centroid + gamma * (simplex[worst] - centroid));
    double fc = eval(xc);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    for (int i = 0; i <= d; ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + delta * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }

  result.iterations = iter;
  int best = static_cast<int>(
      std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace geokit
