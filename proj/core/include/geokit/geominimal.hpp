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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geokit/bodies.hpp"
#include "geokit/functionals.hpp"

namespace geokit {

enum class Family { kEllipsoid, kFourier, kRadialGrid };

std::string to_string(Family family);
Family family_from_string(const std::string& s);

struct SearchConfig {
  Family family = Family::kFourier;
  int k_max = 6;
  // Number of simplex runs per estimate.
  int starts = 8;
  int max_iters = 400;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  // Witness sharing between the alpha = 1, 2, 3 searches of estimate_G_all.
  bool shared_pool = true;
  // Extra competitor tuples, evaluated as-is and used as simplex starts.
  // Each tuple holds one body per competitor slot (or one body, replicated).
  std::vector<std::vector<ConvexSupportBody>> seeds;
  // Star-body tuples for the as_p^{(1)} ascent (one per K_i, or one shared).
  std::vector<std::vector<StarBody>> star_seeds;

  // Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct TraceEntry {
  int start = 0;
  std::string origin;
  double initial = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct GeoEstimate {
  FunctionalValue value;
  // One body for alpha = 1, otherwise one per competitor slot.
  std::vector<ConvexSupportBody> witness;
  // Star witnesses of the as_p^{(1)} search.
  std::vector<StarBody> star_witness;
  int alpha = 0;
  std::vector<TraceEntry> trace;
  // Some simplex run stopped on the iteration budget.
  bool budget_exhausted = false;
  // Origin of the returned value: a start label ("ball", "h_q", "seed:0",
  // "random:3", ...), "closed-form", or "shared:<alpha>".
  std::string source;
};

// n V_p(K; L)^{n/(n+p)} times the alpha-dependent polar factor. For alpha = 1
// Ls holds one body; otherwise one body per K_i. p = 0 ignores Ls.
double objective(int alpha, std::span<const SmoothBody> Ks,
                 std::span<const ConvexSupportBody> Ls, double p);
// Two-body i-weighted variant: Qs holds one body (alpha = 1) or two.
double objective_i(int alpha, const SmoothBody& K, const SmoothBody& L,
                   std::span<const ConvexSupportBody> Qs, double p, double i);

GeoEstimate estimate_G(int alpha, std::span<const SmoothBody> Ks, double p,
                       const SearchConfig& cfg);
// Single-body geominimal surface area (the n = 1-tuple case of alpha = 1).
GeoEstimate estimate_G_tilde(const SmoothBody& K, double p,
                             const SearchConfig& cfg);
// All three alphas with the shared-pool protocol, so that the estimates obey
// the known ordering exactly.
std::array<GeoEstimate, 3> estimate_G_all(std::span<const SmoothBody> Ks,
                                          double p, const SearchConfig& cfg);
GeoEstimate estimate_G_i(int alpha, const SmoothBody& K, const SmoothBody& L,
                         double p, double i, const SearchConfig& cfg);

// Coordinate ascent over log radial samples of n star bodies; p < -n.
GeoEstimate estimate_asp1(std::span<const SmoothBody> Ks, double p,
                          const SearchConfig& cfg);

// Candidate h_Q = (prod f_p(K_i)^{1/n})^{-1/(n+p)}; present iff positive and,
// on the circle, h'' + h >= 0.
std::optional<ConvexSupportBody> vpn_test(std::span<const SmoothBody> Ks,
                                          double p);

// Closed-form competitor fits.
FourierSupport fit_fourier_competitor(std::span<const double> h, int k_max);
// Lower-triangular L with h(u)^2 ~ |L^T u|^2 in least squares; identity when
// the fitted form is not positive definite.
Eigen::MatrixXd fit_ellipsoid_competitor(const SphereGrid& grid,
                                         std::span<const double> h);

}  // namespace geokit
