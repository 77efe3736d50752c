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

#include "geokit/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geokit {
namespace detail {

void require_same_grid(const SphereGrid& a, const SphereGrid& b) {
  if (!a.same_as(b)) throw std::invalid_argument("bodies live on different grids");
}

double guarded_pow(double x, double e) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("nonpositive sample before fractional power");
  }
  if (e == 1.0) return x;
  if (e == -1.0) return 1.0 / x;
  if (e == 2.0) return x * x;
  if (e == -2.0) return 1.0 / (x * x);
  if (e == 0.5) return std::sqrt(x);
  return std::pow(x, e);
}

FunctionalValue combine_power(const FunctionalValue& v, double e) {
  FunctionalValue out = v;
  out.value = guarded_pow(v.value, e);
  out.err = std::abs(e) * (v.err / v.value) * out.value;
  if ((v.kind == ValueKind::kUpperBound || v.kind == ValueKind::kLowerBound) &&
      e < 0) {
    out.kind = v.kind == ValueKind::kUpperBound ? ValueKind::kLowerBound
                                                : ValueKind::kUpperBound;
  }
  return out;
}

}  // namespace detail

namespace {

using detail::guarded_pow;
using detail::require_same_grid;

FunctionalValue quadrature(const SphereGrid& grid,
                           const std::vector<double>& integrand, double scale,
                           std::string id, std::optional<double> p = {},
                           std::optional<double> i = {}) {
  Quadrature q = integrate_with_error(grid, integrand);
  FunctionalValue v;
  v.value = scale * q.value;
  v.err = std::abs(scale) * q.err;
  v.kind = ValueKind::kQuadrature;
  v.meta.id = std::move(id);
  v.meta.p = p;
  v.meta.i = i;
  v.meta.resolution = grid.resolution();
  return v;
}

template <typename Seq>
const SphereGrid& common_grid(const Seq& bodies, std::size_t expected,
                              const char* what) {
  if (bodies.empty()) throw std::invalid_argument(std::string(what) + ": empty");
  const SphereGrid& grid = *bodies[0].grid;
  if (expected != 0 && bodies.size() != expected) {
    throw std::invalid_argument(std::string(what) +
                                ": body count must equal the dimension");
  }
  for (const auto& b : bodies) require_same_grid(grid, *b.grid);
  return grid;
}

const SphereGrid& common_grid_smooth(std::span<const SmoothBody> bodies,
                                     std::size_t expected, const char* what) {
  if (bodies.empty()) throw std::invalid_argument(std::string(what) + ": empty");
  const SphereGrid& grid = *bodies[0].grid();
  if (expected != 0 && bodies.size() != expected) {
    throw std::invalid_argument(std::string(what) +
                                ": body count must equal the dimension");
  }
  for (const auto& b : bodies) require_same_grid(grid, *b.grid());
  return grid;
}

}  // namespace

std::string to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::kClosedForm:
      return "closed-form";
    case ValueKind::kQuadrature:
      return "quadrature";
    case ValueKind::kUpperBound:
      return "optimizer-upper-bound";
    case ValueKind::kLowerBound:
      return "optimizer-lower-bound";
  }
  return "unknown";
}

ValueKind value_kind_from_string(const std::string& s) {
  if (s == "closed-form") return ValueKind::kClosedForm;
  if (s == "quadrature") return ValueKind::kQuadrature;
  if (s == "optimizer-upper-bound") return ValueKind::kUpperBound;
  if (s == "optimizer-lower-bound") return ValueKind::kLowerBound;
  throw std::invalid_argument("unknown value kind: " + s);
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kPositive:
      return "positive";
    case Regime::kZero:
      return "zero";
    case Regime::kNegHigh:
      return "neg-high";
    case Regime::kNegLow:
      return "neg-low";
  }
  return "unknown";
}

PExponent::PExponent(double p, int n) : p_(p), n_(n) {
  if (!std::isfinite(p)) throw std::invalid_argument("p must be finite");
  if (n < 2) throw std::invalid_argument("dimension must be >= 2");
  if (std::abs(p + n) < kMinusNBand) {
    throw std::invalid_argument("p = -n is excluded");
  }
  if (p > 0) {
    regime_ = Regime::kPositive;
  } else if (p == 0) {
    regime_ = Regime::kZero;
  } else if (p > -n) {
    regime_ = Regime::kNegHigh;
  } else {
    regime_ = Regime::kNegLow;
  }
}

FunctionalValue volume_radial(const StarBody& star) {
  const auto& grid = *star.grid;
  const int n = grid.dim();
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = guarded_pow(star.rho[j], n);
  return quadrature(grid, g, 1.0 / n, "volume_radial");
}

FunctionalValue volume(const SmoothBody& body) {
  const auto& grid = *body.grid();
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = body.h()[j] * body.f[j];
  return quadrature(grid, g, 1.0 / grid.dim(), "volume");
}

FunctionalValue polar_volume(const ConvexSupportBody& body) {
  const auto& grid = *body.grid;
  const int n = grid.dim();
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = guarded_pow(body.h[j], -n);
  return quadrature(grid, g, 1.0 / n, "polar_volume");
}

FunctionalValue dual_mixed_volume(std::span<const StarBody> stars) {
  const SphereGrid& grid =
      common_grid(stars, stars.empty() ? 1 : stars[0].grid->dim(),
                  "dual_mixed_volume");
  std::vector<double> g(grid.size(), 1.0);
  for (const auto& s : stars) {
    for (std::size_t j = 0; j < g.size(); ++j) g[j] *= guarded_pow(s.rho[j], 1.0);
  }
  return quadrature(grid, g, 1.0 / grid.dim(), "dual_mixed_volume");
}

FunctionalValue dual_mixed_volume_i(const StarBody& q1, const StarBody& q2,
                                    double i) {
  const auto& grid = *q1.grid;
  require_same_grid(grid, *q2.grid);
  const int n = grid.dim();
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = guarded_pow(q1.rho[j], n - i) * guarded_pow(q2.rho[j], i);
  }
  return quadrature(grid, g, 1.0 / n, "dual_mixed_volume_i", {}, i);
}

std::vector<double> lp_curvature(const SmoothBody& body, double p) {
  PExponent pe(p, body.dim());
  std::vector<double> out(body.f.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = guarded_pow(body.h()[j], 1.0 - p) * guarded_pow(body.f[j], 1.0);
  }
  return out;
}

FunctionalValue p_mixed_volume(const SmoothBody& K, const ConvexSupportBody& Q,
                               double p) {
  const auto& grid = *K.grid();
  require_same_grid(grid, *Q.grid);
  std::vector<double> fp = lp_curvature(K, p);
  for (std::size_t j = 0; j < fp.size(); ++j) fp[j] *= guarded_pow(Q.h[j], p);
  return quadrature(grid, fp, 1.0 / grid.dim(), "p_mixed_volume", p);
}

FunctionalValue p_mixed_volume_multi(std::span<const SmoothBody> Ks,
                                     std::span<const ConvexSupportBody> Qs,
                                     double p) {
  const int n = Ks.empty() ? 0 : Ks[0].dim();
  const SphereGrid& grid = common_grid_smooth(Ks, n, "p_mixed_volume_multi");
  common_grid(Qs, n, "p_mixed_volume_multi");
  require_same_grid(grid, *Qs[0].grid);
  std::vector<double> g(grid.size(), 1.0);
  for (int k = 0; k < n; ++k) {
    std::vector<double> fp = lp_curvature(Ks[k], p);
    for (std::size_t j = 0; j < g.size(); ++j) {
      g[j] *= guarded_pow(guarded_pow(Qs[k].h[j], p) * fp[j], 1.0 / n);
    }
  }
  return quadrature(grid, g, 1.0 / n, "p_mixed_volume_multi", p);
}

FunctionalValue p_mixed_volume_multi_polar(std::span<const SmoothBody> Ks,
                                           std::span<const StarBody> Ls,
                                           double p) {
  const int n = Ks.empty() ? 0 : Ks[0].dim();
  const SphereGrid& grid =
      common_grid_smooth(Ks, n, "p_mixed_volume_multi_polar");
  common_grid(Ls, n, "p_mixed_volume_multi_polar");
  require_same_grid(grid, *Ls[0].grid);
  std::vector<double> g(grid.size(), 1.0);
  for (int k = 0; k < n; ++k) {
    std::vector<double> fp = lp_curvature(Ks[k], p);
    for (std::size_t j = 0; j < g.size(); ++j) {
      g[j] *= guarded_pow(guarded_pow(Ls[k].rho[j], -p) * fp[j], 1.0 / n);
    }
  }
  return quadrature(grid, g, 1.0 / n, "p_mixed_volume_multi_polar", p);
}

FunctionalValue vpi_mixed(const SmoothBody& K, const SmoothBody& L,
                          const ConvexSupportBody& Q1,
                          const ConvexSupportBody& Q2, double p, double i) {
  const auto& grid = *K.grid();
  require_same_grid(grid, *L.grid());
  require_same_grid(grid, *Q1.grid);
  require_same_grid(grid, *Q2.grid);
  const int n = grid.dim();
  std::vector<double> fk = lp_curvature(K, p), fl = lp_curvature(L, p);
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = guarded_pow(guarded_pow(Q1.h[j], p) * fk[j], (n - i) / n) *
           guarded_pow(guarded_pow(Q2.h[j], p) * fl[j], i / n);
  }
  return quadrature(grid, g, 1.0 / n, "vpi_mixed", p, i);
}

FunctionalValue vpi_mixed_polar(const SmoothBody& K, const SmoothBody& L,
                                const StarBody& Q1, const StarBody& Q2,
                                double p, double i) {
  const auto& grid = *K.grid();
  require_same_grid(grid, *L.grid());
  require_same_grid(grid, *Q1.grid);
  require_same_grid(grid, *Q2.grid);
  const int n = grid.dim();
  std::vector<double> fk = lp_curvature(K, p), fl = lp_curvature(L, p);
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = guarded_pow(guarded_pow(Q1.rho[j], -p) * fk[j], (n - i) / n) *
           guarded_pow(guarded_pow(Q2.rho[j], -p) * fl[j], i / n);
  }
  return quadrature(grid, g, 1.0 / n, "vpi_mixed_polar", p, i);
}

FunctionalValue mixed_p_affine(std::span<const SmoothBody> Ks, double p) {
  const int n = Ks.empty() ? 0 : Ks[0].dim();
  const SphereGrid& grid = common_grid_smooth(Ks, n, "mixed_p_affine");
  PExponent pe(p, n);
  std::vector<double> g(grid.size(), 1.0);
  for (const auto& K : Ks) {
    std::vector<double> fp = lp_curvature(K, p);
    for (std::size_t j = 0; j < g.size(); ++j) {
      g[j] *= guarded_pow(fp[j], 1.0 / (n + p));
    }
  }
  return quadrature(grid, g, 1.0, "mixed_p_affine", p);
}

FunctionalValue asp_i(const SmoothBody& K, const SmoothBody& L, double p,
                      double i) {
  const auto& grid = *K.grid();
  require_same_grid(grid, *L.grid());
  const int n = grid.dim();
  PExponent pe(p, n);
  std::vector<double> fk = lp_curvature(K, p), fl = lp_curvature(L, p);
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = guarded_pow(fk[j], (n - i) / (n + p)) *
           guarded_pow(fl[j], i / (n + p));
  }
  return quadrature(grid, g, 1.0, "asp_i", p, i);
}

CurvatureImage p_curvature_image(const SmoothBody& K, double p) {
  const auto& grid = *K.grid();
  const int n = grid.dim();
  PExponent pe(p, n);
  if (p == 0.0) {
    throw std::invalid_argument("the p-curvature image needs p != 0");
  }
  const double omega = ball_volume(n);
  std::vector<double> fp = lp_curvature(K, p);
  std::vector<double> g(fp.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = guarded_pow(fp[j], n / (n + p));
  }
  // V^{p/(n+p)} = (1/n) omega^{-n/(n+p)} * integral of g.
  const double x = integrate(grid, g) / n * std::pow(omega, -n / (n + p));
  const double V = std::pow(x, (n + p) / p);
  std::vector<double> rho(fp.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    rho[j] = guarded_pow(V * fp[j] / omega, 1.0 / (n + p));
  }
  CurvatureImage out{make_star_body(K.grid(), std::move(rho)), V, 0.0};
  const double v_check = volume_radial(out.body).value;
  for (std::size_t j = 0; j < fp.size(); ++j) {
    const double rel =
        std::abs(fp[j] - omega / v_check * std::pow(out.body.rho[j], n + p)) /
        fp[j];
    out.residual = std::max(out.residual, rel);
  }
  return out;
}

FunctionalValue classical_mixed_volume_2d(const SmoothBody& K1,
                                          const SmoothBody& K2) {
  if (K1.dim() != 2) {
    throw std::invalid_argument("classical_mixed_volume_2d is planar");
  }
  const auto& grid = *K1.grid();
  require_same_grid(grid, *K2.grid());
  // Symmetrized integrand; both orders agree analytically.
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = 0.5 * (K1.h()[j] * K2.f[j] + K2.h()[j] * K1.f[j]);
  }
  return quadrature(grid, g, 0.5, "classical_mixed_volume_2d");
}

FunctionalValue classical_mixed_volume_nd(std::span<const SmoothBody> Ks) {
  const int n = Ks.empty() ? 0 : Ks[0].dim();
  if (n != 2 && n != 3) {
    throw std::invalid_argument("classical_mixed_volume_nd supports n in {2,3}");
  }
  const SphereGrid& grid = common_grid_smooth(Ks, n, "classical_mixed_volume_nd");

  // Exponent vectors of degree n.
  std::vector<std::vector<int>> monomials;
  std::vector<int> e(n, 0);
  auto build = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      e[pos] = left;
      monomials.push_back(e);
      return;
    }
    for (int v = left; v >= 0; --v) {
      e[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  build(build, 0, n);
  std::size_t mixed = 0;
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    if (std::all_of(monomials[m].begin(), monomials[m].end(),
                    [](int v) { return v == 1; })) {
      mixed = m;
    }
  }

  std::vector<ConvexSupportBody> supports;
  for (const auto& K : Ks) supports.push_back(K.support);

  const int levels = n + 1;
  std::size_t points = 1;
  for (int k = 0; k < n; ++k) points *= levels;
  Eigen::MatrixXd M(points, monomials.size());
  Eigen::VectorXd vols(points), errs(points);
  std::vector<double> lambda(n);
  for (std::size_t pt = 0; pt < points; ++pt) {
    std::size_t code = pt;
    for (int k = 0; k < n; ++k) {
      lambda[k] = static_cast<double>(code % levels + 1) / levels;
      code /= levels;
    }
    StarBody rho = radial_of_combination(supports, lambda);
    FunctionalValue v = volume_radial(rho);
    vols[pt] = v.value;
    errs[pt] = v.err;
    for (std::size_t m = 0; m < monomials.size(); ++m) {
      double term = 1.0;
      for (int k = 0; k < n; ++k) term *= std::pow(lambda[k], monomials[m][k]);
      M(pt, m) = term;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv[0] / sv[sv.size() - 1];
  if (!(cond < 1e12)) throw std::runtime_error("ill-conditioned mixed-volume fit");
  Eigen::VectorXd coef = svd.solve(vols);
  Eigen::VectorXd residual = M * coef - vols;
  // Sensitivity of the mixed coefficient to each volume sample.
  Eigen::MatrixXd pinv = svd.matrixV() *
                         sv.cwiseInverse().asDiagonal() *
                         svd.matrixU().transpose();
  double factorial = 1.0;
  for (int k = 2; k <= n; ++k) factorial *= k;
  FunctionalValue out;
  out.kind = ValueKind::kQuadrature;
  out.value = coef[mixed] / factorial;
  out.err = (pinv.row(mixed).cwiseAbs().dot(errs) +
             pinv.row(mixed).cwiseAbs().sum() * residual.cwiseAbs().maxCoeff()) /
            factorial;
  out.meta.id = "classical_mixed_volume_nd";
  out.meta.resolution = grid.resolution();
  out.meta.extra["condition_number"] = cond;
  out.meta.extra["fit_residual"] = residual.cwiseAbs().maxCoeff();
  return out;
}

FunctionalValue p_surface_area(const SmoothBody& K, double p) {
  const auto& grid = *K.grid();
  return quadrature(grid, lp_curvature(K, p), 1.0, "p_surface_area", p);
}

double ellipsoid_affine_area(const Eigen::MatrixXd& A, double p) {
  const int n = static_cast<int>(A.rows());
  PExponent pe(p, n);
  return sphere_area(n) *
         std::pow(std::abs(A.determinant()), (n - p) / (n + p));
}

}  // namespace geokit
