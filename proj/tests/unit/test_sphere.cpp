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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "geokit/sphere.hpp"

namespace geokit {
namespace {

constexpr double kPi = std::numbers::pi;

double weight_sum(const SphereGrid& g) {
  return std::accumulate(g.weights().begin(), g.weights().end(), 0.0);
}

TEST(Grid, UniformCircleWeights) {
  const GridPtr g = build_grid(2, 256, GridScheme::kUniformCircle);
  ASSERT_EQ(g->size(), 256u);
  for (double w : g->weights()) EXPECT_DOUBLE_EQ(w, 2 * kPi / 256);
  EXPECT_NEAR(g->angle(64), kPi / 2, 1e-15);
}

TEST(Grid, ProductGaussTotalMeasure) {
  const GridPtr g = build_grid(3, 64, GridScheme::kProductGauss);
  EXPECT_NEAR(weight_sum(*g), 4 * kPi, 1e-12);
}

TEST(Grid, MonteCarloTotalMeasure) {
  const GridPtr g = build_grid(4, 100000, GridScheme::kMonteCarlo, 7);
  EXPECT_NEAR(weight_sum(*g) / (2 * kPi * kPi), 1.0, 5e-3);
  // Nodes lie on the sphere.
  for (std::size_t j = 0; j < 100; ++j) EXPECT_NEAR(g->node(j).norm(), 1.0, 1e-12);
}

TEST(Grid, DefaultSchemeByDimension) {
  EXPECT_EQ(build_default_grid(2, 64)->scheme(), GridScheme::kUniformCircle);
  EXPECT_EQ(build_default_grid(3, 16)->scheme(), GridScheme::kProductGauss);
}

TEST(Grid, RefineDoublesResolution) {
  const GridPtr g = build_default_grid(2, 64);
  const GridPtr f = refine_grid(*g);
  EXPECT_EQ(f->resolution(), 128);
  EXPECT_FALSE(f->same_as(*g));
  EXPECT_TRUE(build_default_grid(2, 64)->same_as(*g));
}

TEST(Grid, BallConstants) {
  EXPECT_NEAR(ball_volume(2), kPi, 1e-15);
  EXPECT_NEAR(ball_volume(3), 4 * kPi / 3, 1e-14);
  EXPECT_NEAR(sphere_area(2), 2 * kPi, 1e-15);
  EXPECT_NEAR(sphere_area(3), 4 * kPi, 1e-14);
}

TEST(Integrate, ConstantOnCircle) {
  const GridPtr g = build_default_grid(2, 128);
  std::vector<double> ones(g->size(), 1.0);
  EXPECT_NEAR(integrate(*g, ones), 2 * kPi, 1e-13);
}

TEST(Integrate, SquaredCoordinateOnSphere) {
  const GridPtr g = build_default_grid(3, 32);
  std::vector<double> s(g->size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::pow(g->node(j)[0], 2);
  EXPECT_NEAR(integrate(*g, s), 4 * kPi / 3, 1e-12);
}

TEST(Integrate, TrigPolynomialAnalytic) {
  const GridPtr g = build_default_grid(2, 256);
  std::vector<double> s(g->size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::pow(std::cos(3 * g->angle(j)), 2);
  EXPECT_NEAR(integrate(*g, s), kPi, 1e-12);
}

TEST(Integrate, ErrorEstimateCoversTruth) {
  // exp(cos t) integrates to 2 pi I_0(1).
  const double truth = 2 * kPi * std::cyl_bessel_i(0.0, 1.0);
  for (int m : {8, 16, 64}) {
    const GridPtr g = build_default_grid(2, m < 64 ? 64 : m);
    std::vector<double> s(g->size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::exp(std::cos(g->angle(j)));
    const Quadrature q = integrate_with_error(*g, s);
    EXPECT_LE(std::abs(q.value - truth), q.err + 1e-15);
    EXPECT_GT(q.err, 0.0);
  }
}

TEST(Differentiate, SineSecondDerivative) {
  const GridPtr g = build_default_grid(2, 128);
  std::vector<double> s(g->size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::sin(g->angle(j));
  const auto d = differentiate_periodic(s, 2);
  for (std::size_t j = 0; j < s.size(); ++j) EXPECT_NEAR(d[j], -s[j], 1e-10);
}

TEST(Differentiate, ConstantHasZeroDerivative) {
  std::vector<double> s(64, 5.0);
  for (double v : differentiate_periodic(s, 1)) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Differentiate, FiniteDifferenceOracle) {
  const int m = 128;
  const GridPtr g = build_default_grid(2, m);
  auto fn = [](double t) { return std::exp(std::cos(t)); };
  std::vector<double> s(m);
  for (int j = 0; j < m; ++j) s[j] = fn(g->angle(j));
  const auto d = differentiate_periodic(s, 2);
  const double h = 2 * kPi / 4096;
  for (int j = 0; j < m; ++j) {
    const double t = g->angle(j);
    const double fd = (-fn(t + 2 * h) + 16 * fn(t + h) - 30 * fn(t) + 16 * fn(t - h) - fn(t - 2 * h)) /
                      (12 * h * h);
    EXPECT_NEAR(d[j], fd, 1e-6);
  }
}

TEST(TrigInterpolant, ReproducesTrigPolynomialOffGrid) {
  const GridPtr g = build_default_grid(2, 64);
  auto fn = [](double t) { return 1.0 + 0.3 * std::cos(2 * t) - 0.1 * std::sin(5 * t); };
  std::vector<double> s(g->size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = fn(g->angle(j));
  const TrigInterpolant ti(s);
  for (double t : {0.123, 1.7, 4.4}) {
    EXPECT_NEAR(ti(t), fn(t), 1e-13);
    EXPECT_NEAR(ti.eval(t, 1), -0.6 * std::sin(2 * t) - 0.5 * std::cos(5 * t), 1e-12);
  }
}

}  // namespace
}  // namespace geokit
