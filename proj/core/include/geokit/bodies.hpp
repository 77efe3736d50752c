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

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "geokit/sphere.hpp"

namespace geokit {

// Minimum of h and h'' + h accepted for planar convex bodies.
inline constexpr double kConvexityMargin = 1e-6;

// Raised when a construction or transformation leaves the admissible class
// (nonpositive support, convexity margin, origin outside the body).
class DegenerateBody : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Planar support function c0 + sum_k a_k cos(k t) + b_k sin(k t), k >= 1.
// a[k-1] and b[k-1] hold the k-th coefficients.
struct FourierSupport {
  double c0 = 1.0;
  std::vector<double> a;
  std::vector<double> b;

  int k_max() const { return static_cast<int>(std::max(a.size(), b.size())); }
  double coeff_a(int k) const;
  double coeff_b(int k) const;
  double value(double theta) const;
  // order in {0, 1, 2}.
  double derivative(double theta, int order) const;
  // h'' + h.
  double curvature(double theta) const;
};

// Least-squares truncation of uniform samples to degree k_max.
FourierSupport fit_fourier(std::span<const double> samples, int k_max);

struct SampledShape {};
struct BallShape {
  double r = 1.0;
};
struct EllipsoidShape {
  Eigen::MatrixXd A;
};
// Closed-form description carried alongside grid samples, when known.
using SupportShape =
    std::variant<SampledShape, BallShape, EllipsoidShape, FourierSupport>;

struct StarBody {
  GridPtr grid;
  std::vector<double> rho;

  int dim() const { return grid->dim(); }
};

struct ConvexSupportBody {
  GridPtr grid;
  std::vector<double> h;
  SupportShape shape;

  int dim() const { return grid->dim(); }
  const FourierSupport* fourier() const {
    return std::get_if<FourierSupport>(&shape);
  }
};

enum class Provenance { kFromSupport, kClosedForm, kSupplied };

std::string to_string(Provenance provenance);

struct SmoothBody {
  ConvexSupportBody support;
  std::vector<double> f;
  Provenance provenance = Provenance::kSupplied;

  const GridPtr& grid() const { return support.grid; }
  const std::vector<double>& h() const { return support.h; }
  int dim() const { return support.dim(); }
};

struct LinearMap {
  Eigen::MatrixXd matrix;
  double det_abs = 0.0;
};

LinearMap make_linear_map(const Eigen::MatrixXd& matrix);

// Validating constructors.
StarBody make_star_body(GridPtr grid, std::vector<double> rho);
// Checks positivity and, on the circle, h'' + h >= kConvexityMargin.
ConvexSupportBody make_support_body(GridPtr grid, std::vector<double> h,
                                    SupportShape shape = SampledShape{});
ConvexSupportBody make_fourier_support(GridPtr grid,
                                       const FourierSupport& fourier);
ConvexSupportBody make_ellipsoid_support(GridPtr grid,
                                         const Eigen::MatrixXd& A);

SmoothBody make_ball(GridPtr grid, double r);
SmoothBody make_ellipsoid(GridPtr grid, const Eigen::MatrixXd& A);
SmoothBody make_fourier_body(GridPtr grid, const FourierSupport& fourier);
// User-supplied (h, f) pair; f is taken as given.
SmoothBody make_supplied_body(GridPtr grid, std::vector<double> h,
                              std::vector<double> f);

// Planar curvature f = h'' + h (analytic for Fourier shapes, spectral
// otherwise).
SmoothBody curvature_from_support(const ConvexSupportBody& body);

// Off-grid evaluation of a sampled field on the sphere: trigonometric
// interpolation on the circle, tensor local quadratic on product grids.
class FieldInterpolator {
 public:
  FieldInterpolator(const SphereGrid& grid, std::span<const double> samples);
  // u must be a unit vector.
  double at(const Eigen::VectorXd& u) const;

 private:
  const SphereGrid* grid_;
  std::vector<double> samples_;
  std::vector<TrigInterpolant> trig_;
};

// Support function at arbitrary nonzero x (1-homogeneous extension).
class SupportEvaluator {
 public:
  explicit SupportEvaluator(const ConvexSupportBody& body);
  double operator()(const Eigen::VectorXd& x) const;

 private:
  const ConvexSupportBody* body_;
  std::vector<FieldInterpolator> field_;
};

// rho_{K°} = 1/h_K.
StarBody polar_radial(const ConvexSupportBody& body);
// Support of the convex hull of the sampled star: max_j rho_j <u_i, u_j>.
ConvexSupportBody support_from_radial(const StarBody& star);

// Radial function of the convex body itself, rho_K(u) = 1/h_{K°}(u),
// computed as min over the tangent plane at u of h_K(u + y). Closed form for
// balls and ellipsoids; continuous minimization otherwise.
StarBody radial_function(const ConvexSupportBody& body);
// Radial function of sum_i lambda_i K_i.
StarBody radial_of_combination(std::span<const ConvexSupportBody> bodies,
                               std::span<const double> lambdas);

// K° as a smooth body (planar, or ellipsoid shapes in any dimension).
SmoothBody polar_body(const SmoothBody& body);

SmoothBody apply_linear(const SmoothBody& body, const LinearMap& phi);
StarBody apply_linear(const StarBody& body, const LinearMap& phi);

SmoothBody dilate(const SmoothBody& body, double r);
ConvexSupportBody dilate(const ConvexSupportBody& body, double r);
StarBody dilate(const StarBody& body, double r);

// Volume-weighted centre of mass.
Eigen::VectorXd centroid(const SmoothBody& body);
// Translates until the centroid is at the origin (|c| < 1e-8, 50 passes).
SmoothBody recenter(const SmoothBody& body);

// Planar test body h = 1 + sum_{k=2..k_max} (a_k cos kt + b_k sin kt) with
// min h >= margin and min (h'' + h) >= margin.
SmoothBody random_smooth_body(GridPtr grid, std::uint64_t seed, int k_max,
                              double margin);
// Planar star body rho = exp(sum_{k=1..k_max} ...), log-amplitude bounded by
// `amplitude`.
StarBody random_star_body(GridPtr grid, std::uint64_t seed, int k_max,
                          double amplitude);

// R1 * diag(exp(s)) * R2 with |s_i| <= max_log_stretch; optional unit
// determinant.
Eigen::MatrixXd random_linear_matrix(std::mt19937_64& rng, int dim,
                                     double max_log_stretch,
                                     bool unit_determinant);

}  // namespace geokit
