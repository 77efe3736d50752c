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
#include <random>

#include "geokit/bodies.hpp"
#include "geokit/functionals.hpp"

namespace geokit {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd diag(double a, double b) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = a;
  A(1, 1) = b;
  return A;
}

// Uniform trapezoid on [0, 2 pi), spectrally accurate for smooth periodic g.
template <class F>
double periodic_integral(F g, int points = 20000) {
  double s = 0.0;
  for (int j = 0; j < points; ++j) s += g(2 * kPi * j / points);
  return s * 2 * kPi / points;
}

// Planar mixed volume from Fourier coefficients:
// pi c0 d0 + (pi/2) sum (1 - k^2)(a_k a'_k + b_k b'_k).
double fourier_mixed_volume(const FourierSupport& f, const FourierSupport& g) {
  double v = kPi * f.c0 * g.c0;
  const int k_max = std::max(f.k_max(), g.k_max());
  for (int k = 1; k <= k_max; ++k) {
    v += 0.5 * kPi * (1 - k * k) * (f.coeff_a(k) * g.coeff_a(k) + f.coeff_b(k) * g.coeff_b(k));
  }
  return v;
}

class Planar : public ::testing::Test {
 protected:
  GridPtr grid = build_default_grid(2, 128);
  SmoothBody body(std::uint64_t seed) const { return random_smooth_body(grid, seed, 5, 0.05); }
  StarBody star(std::uint64_t seed) const { return random_star_body(grid, seed, 4, 0.5); }
};

TEST(PExponentTest, Regimes) {
  EXPECT_EQ(PExponent(1, 2).regime(), Regime::kPositive);
  EXPECT_EQ(PExponent(0, 2).regime(), Regime::kZero);
  EXPECT_EQ(PExponent(-1, 2).regime(), Regime::kNegHigh);
  EXPECT_EQ(PExponent(-3, 2).regime(), Regime::kNegLow);
  EXPECT_THROW(PExponent(-2, 2), std::invalid_argument);
  EXPECT_THROW(PExponent(std::nan(""), 2), std::invalid_argument);
}

TEST_F(Planar, RadialVolume) {
  EXPECT_NEAR(volume_radial(make_star_body(grid, std::vector<double>(128, 1.0))).value, kPi, 1e-13);
  const GridPtr g3 = build_default_grid(3, 32);
  EXPECT_NEAR(volume_radial(make_star_body(g3, std::vector<double>(g3->size(), 2.0))).value,
              32 * kPi / 3, 1e-11);
}

TEST_F(Planar, RadialVolumeMonteCarlo) {
  std::vector<double> rho(grid->size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = 1 + 0.2 * std::cos(grid->angle(j));
  const double v = volume_radial(make_star_body(grid, rho)).value;
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> x(-1.2, 1.2), y(-1.2, 1.2);
  const int samples = 10'000'000;
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    const double px = x(rng), py = y(rng);
    if (std::hypot(px, py) <= 1 + 0.2 * std::cos(std::atan2(py, px))) ++hits;
  }
  const double box = 2.4 * 2.4;
  const double frac = static_cast<double>(hits) / samples;
  const double est = box * frac;
  const double se = box * std::sqrt(frac * (1 - frac) / samples);
  EXPECT_LE(std::abs(v - est), 3 * se);
}

TEST_F(Planar, PolarVolume) {
  EXPECT_NEAR(polar_volume(make_ball(grid, 2.0).support).value, kPi / 4, 1e-13);
  EXPECT_NEAR(polar_volume(make_ellipsoid(grid, diag(2, 1)).support).value, kPi / 2, 1e-12);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SmoothBody k = recenter(body(seed));
    EXPECT_LE(volume(k).value * polar_volume(k.support).value, kPi * kPi) << seed;
  }
}

TEST_F(Planar, DualMixedVolume) {
  const StarBody l = star(1);
  std::vector<StarBody> same{l, l};
  EXPECT_NEAR(dual_mixed_volume(same).value, volume_radial(l).value, 1e-13);
  std::vector<StarBody> balls{make_star_body(grid, std::vector<double>(128, 0.5)),
                              make_star_body(grid, std::vector<double>(128, 3.0))};
  EXPECT_NEAR(dual_mixed_volume(balls).value, kPi * 1.5, 1e-13);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::vector<StarBody> pair{star(seed), star(seed + 1000)};
    const double v = dual_mixed_volume(pair).value;
    EXPECT_LE(v * v, volume_radial(pair[0]).value * volume_radial(pair[1]).value);
    std::vector<StarBody> dil{pair[0], dilate(pair[0], 1.7)};
    const double d = dual_mixed_volume(dil).value;
    EXPECT_NEAR(d * d / (volume_radial(dil[0]).value * volume_radial(dil[1]).value), 1.0, 1e-12);
  }
}

TEST_F(Planar, DualMixedVolumeI) {
  const StarBody q1 = star(2), q2 = star(3);
  EXPECT_NEAR(dual_mixed_volume_i(q1, q2, 0).value, volume_radial(q1).value, 1e-13);
  EXPECT_NEAR(dual_mixed_volume_i(q1, q2, 2).value, volume_radial(q2).value, 1e-13);
  EXPECT_NEAR(dual_mixed_volume_i(q1, q1, 0.7).value, volume_radial(q1).value, 1e-13);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const StarBody a = star(seed), b = star(seed + 500);
    const double va = volume_radial(a).value, vb = volume_radial(b).value;
    for (double i : {0.5, 1.0, 1.5}) {
      EXPECT_LE(std::pow(dual_mixed_volume_i(a, b, i).value, 2),
                std::pow(va, 2 - i) * std::pow(vb, i) * (1 + 1e-13));
    }
    for (double i : {-1.0, 3.0}) {
      EXPECT_GE(std::pow(dual_mixed_volume_i(a, b, i).value, 2),
                std::pow(va, 2 - i) * std::pow(vb, i) * (1 - 1e-13));
    }
  }
}

TEST_F(Planar, LpCurvature) {
  for (double f : lp_curvature(make_ball(grid, 2.0), 3.0)) EXPECT_NEAR(f, 0.5, 1e-15);
  const SmoothBody k = body(4);
  EXPECT_EQ(lp_curvature(k, 1.0), k.f);
  const Eigen::MatrixXd A = diag(2, 1);
  const SmoothBody e = make_ellipsoid(grid, A);
  const double p = 1.5;
  const auto fp = lp_curvature(e, p);
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double h = (A.transpose() * grid->node(j)).norm();
    EXPECT_NEAR(fp[j], std::pow(A.determinant(), 2) * std::pow(h, -(2 + p)), 1e-10 * fp[j]);
  }
}

TEST_F(Planar, PMixedVolume) {
  const SmoothBody k = body(5);
  EXPECT_NEAR(p_mixed_volume(k, k.support, 2.5).value, volume(k).value, 1e-12);
  EXPECT_NEAR(p_mixed_volume(make_ball(grid, 1.5), make_ball(grid, 1).support, 0.5).value,
              kPi * std::pow(1.5, 1.5), 1e-12);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SmoothBody a = body(seed), b = body(seed + 100);
    const double oracle = fourier_mixed_volume(*a.support.fourier(), *b.support.fourier());
    EXPECT_NEAR(p_mixed_volume(a, b.support, 1.0).value, oracle, 1e-10);
    EXPECT_NEAR(classical_mixed_volume_2d(a, b).value, oracle, 1e-10);
  }
}

TEST_F(Planar, PMixedVolumeMulti) {
  const SmoothBody k = body(6), q = body(7);
  std::vector<SmoothBody> ks{k, k};
  std::vector<ConvexSupportBody> qs{q.support, q.support};
  EXPECT_NEAR(p_mixed_volume_multi(ks, qs, 1.7).value, p_mixed_volume(k, q.support, 1.7).value,
              1e-12);
  std::vector<SmoothBody> balls{make_ball(grid, 2), make_ball(grid, 3)};
  std::vector<ConvexSupportBody> ones{make_ball(grid, 1).support, make_ball(grid, 1).support};
  // integrand prod (r_i^{1-p} r_i)^{1/2}
  EXPECT_NEAR(p_mixed_volume_multi(balls, ones, 2.0).value, kPi, 1e-12);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (double p : {2.0, -0.5, -3.0}) {
      std::vector<SmoothBody> kk{body(seed), body(seed + 1)};
      std::vector<ConvexSupportBody> qq{body(seed + 2).support, body(seed + 3).support};
      const double v = p_mixed_volume_multi(kk, qq, p).value;
      EXPECT_LE(v * v, p_mixed_volume(kk[0], qq[0], p).value * p_mixed_volume(kk[1], qq[1], p).value *
                           (1 + 1e-12));
    }
  }
}

TEST_F(Planar, PMixedVolumeMultiPolar) {
  std::vector<SmoothBody> ks{body(8), body(9)};
  std::vector<StarBody> unit{make_star_body(grid, std::vector<double>(128, 1.0)),
                             make_star_body(grid, std::vector<double>(128, 1.0))};
  std::vector<ConvexSupportBody> unit_q{make_ball(grid, 1).support, make_ball(grid, 1).support};
  EXPECT_NEAR(p_mixed_volume_multi_polar(ks, unit, 2.0).value,
              p_mixed_volume_multi(ks, unit_q, 2.0).value, 1e-12);
  // Convex L: h_{L°} = 1 / rho_L exactly.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SmoothBody l1 = recenter(body(seed + 20)), l2 = recenter(body(seed + 40));
    std::vector<StarBody> ls{radial_function(l1.support), radial_function(l2.support)};
    std::vector<ConvexSupportBody> polars;
    for (const auto& l : ls) {
      std::vector<double> h(l.rho.size());
      for (std::size_t j = 0; j < h.size(); ++j) h[j] = 1.0 / l.rho[j];
      polars.push_back(make_support_body(grid, h));
    }
    for (double p : {1.0, -1.0}) {
      EXPECT_NEAR(p_mixed_volume_multi_polar(ks, ls, p).value /
                      p_mixed_volume_multi(ks, polars, p).value,
                  1.0, 5e-3);
    }
    std::vector<SmoothBody> kk{ks[0], ks[0]};
    std::vector<StarBody> ll{ls[0], ls[0]};
    EXPECT_NEAR(p_mixed_volume_multi_polar(kk, ll, 2.0).value,
                p_mixed_volume(ks[0], polars[0], 2.0).value, 1e-9);
  }
}

TEST_F(Planar, VpiMixed) {
  const SmoothBody k = body(10), l = body(11);
  const ConvexSupportBody q1 = body(12).support, q2 = body(13).support;
  const double p = 1.5;
  EXPECT_NEAR(vpi_mixed(k, l, q1, q2, p, 0).value, p_mixed_volume(k, q1, p).value, 1e-12);
  EXPECT_NEAR(vpi_mixed(k, l, q1, q2, p, 2).value, p_mixed_volume(l, q2, p).value, 1e-12);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SmoothBody a = body(seed), b = body(seed + 7);
    const ConvexSupportBody c = body(seed + 14).support, d = body(seed + 21).support;
    for (auto [i, j, kk] : {std::array<double, 3>{-1, 0.5, 2}, {0, 1, 3}, {0.5, 1, 1.5}}) {
      const double vi = vpi_mixed(a, b, c, d, p, i).value;
      const double vj = vpi_mixed(a, b, c, d, p, j).value;
      const double vk = vpi_mixed(a, b, c, d, p, kk).value;
      EXPECT_LE(vj, std::pow(vi, (kk - j) / (kk - i)) * std::pow(vk, (j - i) / (kk - i)) * (1 + 1e-12));
    }
  }
}

TEST_F(Planar, MixedAffineOnBallsAndEllipses) {
  std::vector<SmoothBody> balls{make_ball(grid, 1), make_ball(grid, 1)};
  for (double p : {1.0, 2.0, 0.5, -0.5, -1.0, -3.0}) {
    EXPECT_NEAR(mixed_p_affine(balls, p).value / (2 * kPi), 1.0, 1e-10) << p;
  }
  Eigen::MatrixXd A(2, 2);
  A << 1.4, 0.3, -0.2, 0.7;
  std::vector<SmoothBody> es{make_ellipsoid(grid, A), make_ellipsoid(grid, A)};
  for (double p : {1.0, 2.0, -1.0, -3.0}) {
    // f_p(E)^{n/(n+p)} = det^{2n/(n+p)} h^{-n} and the integral of |A^T u|^{-2} is 2 pi / det.
    const double det = std::abs(A.determinant());
    const double oracle = periodic_integral([&](double t) {
      const double h = (A.transpose() * Eigen::Vector2d(std::cos(t), std::sin(t))).norm();
      return std::pow(det, 4.0 / (2 + p)) * std::pow(h, -2.0);
    });
    const double closed = 2 * kPi * std::pow(det, (2 - p) / (2 + p));
    EXPECT_NEAR(oracle / closed, 1.0, 1e-12);
    EXPECT_NEAR(mixed_p_affine(es, p).value / closed, 1.0, 1e-8);
    EXPECT_NEAR(ellipsoid_affine_area(A, p) / closed, 1.0, 1e-14);
  }
}

TEST_F(Planar, MixedAffineHolder) {
  const SmoothBody b = make_ball(grid, 1.2);
  const SmoothBody e = make_ellipsoid(grid, diag(1.5, 0.6));
  for (double p : {1.0, 2.0, 5.0}) {
    std::vector<SmoothBody> mix{b, e}, bb{b, b}, ee{e, e};
    EXPECT_LE(mixed_p_affine(mix, p).value,
              std::sqrt(mixed_p_affine(bb, p).value * mixed_p_affine(ee, p).value));
  }
}

TEST_F(Planar, AspI) {
  const SmoothBody k = body(14), l = body(15);
  const double p = 2.0;
  std::vector<SmoothBody> kk{k, k};
  EXPECT_NEAR(asp_i(k, l, p, 0).value, mixed_p_affine(kk, p).value, 1e-12);
  const SmoothBody ball = make_ball(grid, 1);
  EXPECT_NEAR(asp_i(ball, ball, p, 1).value, 2 * kPi, 1e-11);
  for (double q : {1.0, 3.0, -0.5}) {
    EXPECT_NEAR(asp_i(k, ball, q, -q).value / (2 * p_mixed_volume(k, ball.support, q).value), 1.0,
                1e-12);
    EXPECT_NEAR(asp_i(k, ball, q, -q).value / p_surface_area(k, q).value, 1.0, 1e-12);
  }
}

TEST_F(Planar, CurvatureImageOfBalls) {
  for (double p : {1.0, 2.0, -1.0, -3.0}) {
    const CurvatureImage unit = p_curvature_image(make_ball(grid, 1), p);
    for (double r : unit.body.rho) EXPECT_NEAR(r, 1.0, 1e-12);
    const double r = 1.7;
    const CurvatureImage img = p_curvature_image(make_ball(grid, r), p);
    for (double rho : img.body.rho) EXPECT_NEAR(rho, std::pow(r, (2 - p) / p), 1e-12);
    EXPECT_LE(img.residual, 1e-10);
  }
}

TEST_F(Planar, CurvatureImageOfEllipseFixedPoint) {
  Eigen::MatrixXd A(2, 2);
  A << 1.3, 0.2, 0.1, 0.8;
  const SmoothBody e = make_ellipsoid(grid, A);
  const double w = kPi;
  for (double p : {1.0, 2.0}) {
    // rho = (c f_p)^{1/(n+p)} with c = |Lambda| / omega; iterate c -> c^{n/(n+p)} I / omega.
    const auto fp = lp_curvature(e, p);
    double I = 0.0;
    for (std::size_t j = 0; j < fp.size(); ++j) I += 0.5 * std::pow(fp[j], 2 / (2 + p)) * grid->weights()[j];
    double c = 1.0;
    for (int it = 0; it < 500; ++it) c = std::pow(c, 2 / (2 + p)) * I / w;
    const CurvatureImage img = p_curvature_image(e, p);
    for (std::size_t j = 0; j < fp.size(); ++j) {
      const double rho = std::pow(c * fp[j], 1 / (2 + p));
      EXPECT_NEAR(img.body.rho[j] / rho, 1.0, 1e-9);
      EXPECT_NEAR(img.body.rho[j] * (A.transpose() * grid->node(j)).norm() /
                      (img.body.rho[0] * (A.transpose() * grid->node(0)).norm()),
                  1.0, 1e-9);
    }
  }
}

TEST_F(Planar, CurvatureImageResidual) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (double p : {1.0, 2.0, -1.0, -3.0}) {
      ASSERT_LE(p_curvature_image(body(seed), p).residual, 1e-10) << seed << " " << p;
    }
  }
}

TEST_F(Planar, ClassicalMixedVolume) {
  const SmoothBody k = body(16);
  EXPECT_NEAR(classical_mixed_volume_2d(k, k).value, volume(k).value, 1e-12);
  EXPECT_NEAR(classical_mixed_volume_2d(make_ball(grid, 1), make_ball(grid, 2.5)).value,
              2.5 * kPi, 1e-12);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SmoothBody a = body(seed), b = body(seed + 300);
    const double v = classical_mixed_volume_2d(a, b).value;
    EXPECT_GE(v * v, volume(a).value * volume(b).value);
    std::vector<SmoothBody> ab{a, b};
    const FunctionalValue nd = classical_mixed_volume_nd(ab);
    EXPECT_LE(std::abs(nd.value - v), nd.err + 1e-10) << seed;
  }
  // The radial samples of the interpolation path converge with resolution.
  const GridPtr fine = build_default_grid(2, 512);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<SmoothBody> ab{random_smooth_body(fine, seed, 5, 0.05),
                               random_smooth_body(fine, seed + 300, 5, 0.05)};
    EXPECT_NEAR(classical_mixed_volume_nd(ab).value, classical_mixed_volume_2d(ab[0], ab[1]).value,
                1e-8)
        << seed;
  }
  std::vector<SmoothBody> same{k, k};
  EXPECT_NEAR(classical_mixed_volume_nd(same).value, volume(k).value, 1e-6);
}

TEST(Functionals, ClassicalMixedVolumeThreeBalls) {
  const GridPtr g3 = build_default_grid(3, 32);
  std::vector<SmoothBody> balls{make_ball(g3, 1.0), make_ball(g3, 1.5), make_ball(g3, 0.7)};
  EXPECT_NEAR(classical_mixed_volume_nd(balls).value / (4 * kPi / 3 * 1.5 * 0.7), 1.0, 1e-6);
}

TEST_F(Planar, PSurfaceArea) {
  EXPECT_NEAR(p_surface_area(make_ball(grid, 1), 3.0).value, 2 * kPi, 1e-12);
  EXPECT_NEAR(p_surface_area(make_ball(grid, 2), 1.5).value, 2 * kPi * std::pow(2, 0.5), 1e-12);
  // Perimeter of the ellipse (a cos t, b sin t).
  const double a = 2, b = 1;
  const double perimeter = periodic_integral(
      [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); });
  EXPECT_NEAR(p_surface_area(make_ellipsoid(grid, diag(a, b)), 1.0).value, perimeter, 1e-9);
}

TEST_F(Planar, ValueMetadata) {
  const FunctionalValue v = p_mixed_volume(body(1), body(2).support, 2.0);
  EXPECT_EQ(v.kind, ValueKind::kQuadrature);
  EXPECT_GT(v.err, 0.0);
  EXPECT_EQ(v.meta.p, 2.0);
  EXPECT_EQ(v.meta.resolution, 128);
  EXPECT_EQ(value_kind_from_string(to_string(ValueKind::kUpperBound)), ValueKind::kUpperBound);
}

}  // namespace
}  // namespace geokit
