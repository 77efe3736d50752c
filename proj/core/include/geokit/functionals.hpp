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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geokit/bodies.hpp"

namespace geokit {

enum class ValueKind { kClosedForm, kQuadrature, kUpperBound, kLowerBound };

std::string to_string(ValueKind kind);
ValueKind value_kind_from_string(const std::string& s);

struct ValueMeta {
  std::string id;
  std::optional<double> p;
  std::optional<double> i;
  int resolution = 0;
  std::map<std::string, double> extra;
};

// Upper-bound values satisfy true <= value + err, lower-bound values
// true >= value - err, the others |true - value| <= err.
struct FunctionalValue {
  double value = 0.0;
  ValueKind kind = ValueKind::kQuadrature;
  double err = 0.0;
  ValueMeta meta;
};

enum class Regime { kPositive, kZero, kNegHigh, kNegLow };

std::string to_string(Regime regime);

// Half-width of the rejected band around p = -n.
inline constexpr double kMinusNBand = 1e-6;

class PExponent {
 public:
  PExponent(double p, int n);

  double p() const { return p_; }
  int n() const { return n_; }
  Regime regime() const { return regime_; }
  // Infimum regimes (p >= 0) versus supremum regimes.
  bool is_inf() const { return p_ >= 0.0; }

 private:
  double p_;
  int n_;
  Regime regime_;
};

FunctionalValue volume_radial(const StarBody& star);
// (1/n) * integral of h f.
FunctionalValue volume(const SmoothBody& body);
FunctionalValue polar_volume(const ConvexSupportBody& body);
FunctionalValue dual_mixed_volume(std::span<const StarBody> stars);
FunctionalValue dual_mixed_volume_i(const StarBody& q1, const StarBody& q2,
                                    double i);

// h^{1-p} f.
std::vector<double> lp_curvature(const SmoothBody& body, double p);

FunctionalValue p_mixed_volume(const SmoothBody& K, const ConvexSupportBody& Q,
                               double p);
FunctionalValue p_mixed_volume_multi(std::span<const SmoothBody> Ks,
                                     std::span<const ConvexSupportBody> Qs,
                                     double p);
// Competitors given as star bodies L_i, entering through rho_{L_i}^{-p}.
FunctionalValue p_mixed_volume_multi_polar(std::span<const SmoothBody> Ks,
                                           std::span<const StarBody> Ls,
                                           double p);
FunctionalValue vpi_mixed(const SmoothBody& K, const SmoothBody& L,
                          const ConvexSupportBody& Q1,
                          const ConvexSupportBody& Q2, double p, double i);
FunctionalValue vpi_mixed_polar(const SmoothBody& K, const SmoothBody& L,
                                const StarBody& Q1, const StarBody& Q2,
                                double p, double i);

FunctionalValue mixed_p_affine(std::span<const SmoothBody> Ks, double p);
FunctionalValue asp_i(const SmoothBody& K, const SmoothBody& L, double p,
                      double i);

struct CurvatureImage {
  StarBody body;
  double volume = 0.0;
  // max_j |f_p - (omega_n / |image|) rho^{n+p}| / f_p, with |image| recomputed
  // from the radial samples.
  double residual = 0.0;
};

CurvatureImage p_curvature_image(const SmoothBody& K, double p);

FunctionalValue classical_mixed_volume_2d(const SmoothBody& K1,
                                          const SmoothBody& K2);
// Mixed coefficient of |sum lambda_i K_i| from a least-squares fit over the
// lambda lattice {1..n+1}/(n+1). meta.extra carries condition_number and
// fit_residual.
FunctionalValue classical_mixed_volume_nd(std::span<const SmoothBody> Ks);

FunctionalValue p_surface_area(const SmoothBody& K, double p);

// Closed-form mixed p-affine surface area of n copies of the ellipsoid AB.
double ellipsoid_affine_area(const Eigen::MatrixXd& A, double p);

// Helpers shared with the estimator and the rule catalogue.
namespace detail {

void require_same_grid(const SphereGrid& a, const SphereGrid& b);
double guarded_pow(double x, double e);
// Multiplies values, propagating relative errors.
FunctionalValue combine_power(const FunctionalValue& v, double e);

}  // namespace detail

}  // namespace geokit
