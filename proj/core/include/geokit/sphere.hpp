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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geokit {

enum class GridScheme { kUniformCircle, kProductGauss, kMonteCarlo };

std::string to_string(GridScheme scheme);

// Total surface measure of S^{n-1}.
double sphere_area(int n);
// Volume of the unit ball in R^n.
double ball_volume(int n);

// Quadrature nodes and weights on S^{n-1}. Immutable once built; share
// through GridPtr.
//
// uniform-circle: m nodes at 2*pi*j/m, weight 2*pi/m.
// product-gauss:  resolution m is the azimuth count (even); m/2 Gauss-Legendre
//                 nodes in t = cos(polar angle). Node j = it * m + ip. Exact
//                 for polynomials of degree <= m-1 in t times trigonometric
//                 degree < m in azimuth.
// monte-carlo:    m seeded uniform nodes, weight sphere_area(n)/m.
class SphereGrid {
 public:
  SphereGrid(int dim, int resolution, GridScheme scheme, std::uint64_t seed,
             Eigen::MatrixXd nodes, std::vector<double> weights);

  int dim() const { return dim_; }
  int resolution() const { return resolution_; }
  GridScheme scheme() const { return scheme_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return weights_.size(); }

  const Eigen::MatrixXd& nodes() const { return nodes_; }
  Eigen::VectorXd node(std::size_t j) const { return nodes_.col(j); }
  const std::vector<double>& weights() const { return weights_; }

  // Uniform-circle angle of node j.
  double angle(std::size_t j) const;

  // Product-gauss structure.
  int polar_count() const { return polar_count_; }
  int azimuth_count() const { return azimuth_count_; }
  const std::vector<double>& polar_nodes() const { return polar_nodes_; }

  // Polynomial exactness degree note for the scheme (metadata only).
  std::string exactness() const;

  bool same_as(const SphereGrid& other) const;

  void set_product_structure(int polar_count, int azimuth_count,
                             std::vector<double> polar_nodes);

 private:
  int dim_;
  int resolution_;
  GridScheme scheme_;
  std::uint64_t seed_;
  Eigen::MatrixXd nodes_;
  std::vector<double> weights_;
  int polar_count_ = 0;
  int azimuth_count_ = 0;
  std::vector<double> polar_nodes_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

GridPtr build_grid(int dim, int resolution, GridScheme scheme,
                   std::uint64_t seed = 0);

// Picks the scheme by dimension: circle for 2, product-gauss for 3,
// Monte Carlo above.
GridPtr build_default_grid(int dim, int resolution, std::uint64_t seed = 0);

// Same scheme and seed, doubled resolution.
GridPtr refine_grid(const SphereGrid& grid);

double integrate(const SphereGrid& grid, std::span<const double> samples);

struct Quadrature {
  double value = 0.0;
  double err = 0.0;
};

// integrate() plus an error estimate from the half-resolution subrule
// (every other node in the uniform direction, weights doubled). Monte Carlo
// grids report three standard errors. A roundoff floor is always added.
Quadrature integrate_with_error(const SphereGrid& grid,
                                std::span<const double> samples);

// Spectral derivative of a sampled 2*pi-periodic function at uniform nodes.
// order in {1, 2}; the length must be even. The Nyquist mode is zeroed for
// odd orders.
std::vector<double> differentiate_periodic(std::span<const double> samples,
                                           int order);

// Trigonometric interpolant of uniform samples on [0, 2*pi).
class TrigInterpolant {
 public:
  explicit TrigInterpolant(std::span<const double> samples);

  double operator()(double theta) const { return eval(theta, 0); }
  // Value or derivative (order 0, 1, 2) at theta.
  double eval(double theta, int order) const;

  // cos/sin coefficients; a[0] is the mean, b[0] = 0. The Nyquist cosine
  // term is stored at a[m/2].
  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace geokit
