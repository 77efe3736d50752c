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

#include "geokit/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "geokit/nelder_mead.hpp"

namespace geokit {
namespace {

constexpr double kPi = std::numbers::pi;

void require_grid(const GridPtr& grid) {
  if (!grid) throw std::invalid_argument("body requires a grid");
}

void require_size(const GridPtr& grid, std::size_t n, const char* what) {
  if (n != grid->size()) {
    throw std::invalid_argument(std::string(what) +
                                " sample count does not match grid size");
  }
}

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * kPi);
  if (t < 0) t += 2.0 * kPi;
  return t;
}

std::vector<double> planar_curvature(const ConvexSupportBody& body) {
  const auto& grid = *body.grid;
  std::vector<double> f(grid.size());
  if (const FourierSupport* fs = body.fourier()) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      f[j] = fs->curvature(grid.angle(j));
    }
    return f;
  }
  std::vector<double> d2 = differentiate_periodic(body.h, 2);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = body.h[j] + d2[j];
  return f;
}

double safe_det(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix not square");
  double det = A.determinant();
  double scale = std::pow(std::max(A.norm(), 1e-300), A.rows());
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale) {
    throw std::invalid_argument("matrix is singular");
  }
  return det;
}

Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  int k = 0;
  u.cwiseAbs().maxCoeff(&k);
  // Gram-Schmidt with u first, skipping the axis most aligned with u.
  Eigen::MatrixXd basis(n, n);
  basis.col(0) = u;
  int filled = 1;
  for (int c = 0; c < n && filled < n; ++c) {
    if (c == k) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, c);
    for (int i = 0; i < filled; ++i) v -= v.dot(basis.col(i)) * basis.col(i);
    double nv = v.norm();
    if (nv < 1e-8) continue;
    basis.col(filled++) = v / nv;
  }
  return basis.rightCols(n - 1);
}

using Evaluator = std::function<double(const Eigen::VectorXd&)>;

// rho(u) = min over the tangent plane at u of h(u + y).
std::vector<double> radial_by_minimization(const SphereGrid& grid,
                                           std::span<const double> h,
                                           const Evaluator& ev) {
  const std::size_t N = grid.size();
  const auto& nodes = grid.nodes();
  std::vector<double> rho(N);
  if (grid.dim() == 2) {
    const double spacing = 2.0 * kPi / static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double phi = grid.angle(i);
      double best = std::numeric_limits<double>::infinity();
      double best_delta = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        double c = nodes.col(i).dot(nodes.col(j));
        if (c <= 1e-3) continue;
        double v = h[j] / c;
        if (v < best) {
          best = v;
          best_delta = std::remainder(grid.angle(j) - phi, 2.0 * kPi);
        }
      }
      auto g = [&](double delta) {
        Eigen::VectorXd x(2);
        x << std::cos(phi + delta), std::sin(phi + delta);
        return ev(x) / std::cos(delta);
      };
      const double limit = 0.5 * kPi - 1e-6;
      double width = spacing;
      double value = best;
      for (int pass = 0; pass < 6; ++pass) {
        double lo = std::max(best_delta - width, -limit);
        double hi = std::min(best_delta + width, limit);
        auto r = boost::math::tools::brent_find_minima(g, lo, hi, 40);
        value = std::min(value, r.second);
        bool at_edge = (r.first - lo < 1e-3 * width && lo > -limit) ||
                       (hi - r.first < 1e-3 * width && hi < limit);
        if (!at_edge) break;
        best_delta = r.first;
        width *= 2.0;
      }
      rho[i] = value;
    }
    return rho;
  }

  NelderMeadOptions opts;
  opts.max_iters = 800;
  opts.tol = 1e-15;
  opts.adaptive = false;
  for (std::size_t i = 0; i < N; ++i) {
    Eigen::VectorXd u = nodes.col(i);
    Eigen::MatrixXd T = tangent_basis(u);
    double best = std::numeric_limits<double>::infinity();
    std::size_t jbest = i;
    for (std::size_t j = 0; j < N; ++j) {
      double c = u.dot(nodes.col(j));
      if (c <= 0.2) continue;
      double v = h[j] / c;
      if (v < best) {
        best = v;
        jbest = j;
      }
    }
    Eigen::VectorXd uj = nodes.col(jbest);
    Eigen::VectorXd y0 = T.transpose() * uj / u.dot(uj);
    auto g = [&](const Eigen::VectorXd& y) { return ev(u + T * y); };
    opts.initial_step = 0.05;
    NelderMeadResult r = nelder_mead_minimize(g, y0, opts);
    // Restart once from the optimum with a small simplex.
    opts.initial_step = 1e-3;
    NelderMeadResult r2 = nelder_mead_minimize(g, r.x, opts);
    rho[i] = std::min({best, r.value, r2.value});
  }
  return rho;
}

}  // namespace

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::kFromSupport:
      return "from-support";
    case Provenance::kClosedForm:
      return "closed-form";
    case Provenance::kSupplied:
      return "supplied";
  }
  return "unknown";
}

double FourierSupport::coeff_a(int k) const {
  return (k >= 1 && k <= static_cast<int>(a.size())) ? a[k - 1] : 0.0;
}

double FourierSupport::coeff_b(int k) const {
  return (k >= 1 && k <= static_cast<int>(b.size())) ? b[k - 1] : 0.0;
}

double FourierSupport::derivative(double theta, int order) const {
  double sum = order == 0 ? c0 : 0.0;
  const int km = k_max();
  for (int k = 1; k <= km; ++k) {
    const double c = std::cos(k * theta), s = std::sin(k * theta);
    const double ak = coeff_a(k), bk = coeff_b(k);
    switch (order) {
      case 0:
        sum += ak * c + bk * s;
        break;
      case 1:
        sum += k * (bk * c - ak * s);
        break;
      default:
        sum -= static_cast<double>(k) * k * (ak * c + bk * s);
        break;
    }
  }
  return sum;
}

double FourierSupport::value(double theta) const {
  return derivative(theta, 0);
}

double FourierSupport::curvature(double theta) const {
  return derivative(theta, 0) + derivative(theta, 2);
}

FourierSupport fit_fourier(std::span<const double> samples, int k_max) {
  TrigInterpolant interp(samples);
  const int kn = static_cast<int>(interp.a().size()) - 1;
  if (k_max >= kn) {
    throw std::invalid_argument("fit degree must be below the Nyquist mode");
  }
  FourierSupport fs;
  fs.c0 = interp.a()[0];
  fs.a.assign(interp.a().begin() + 1, interp.a().begin() + 1 + k_max);
  fs.b.assign(interp.b().begin() + 1, interp.b().begin() + 1 + k_max);
  return fs;
}

LinearMap make_linear_map(const Eigen::MatrixXd& matrix) {
  LinearMap phi;
  phi.matrix = matrix;
  phi.det_abs = std::abs(safe_det(matrix));
  return phi;
}

StarBody make_star_body(GridPtr grid, std::vector<double> rho) {
  require_grid(grid);
  require_size(grid, rho.size(), "radial");
  for (double r : rho) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw DegenerateBody("radial function must be positive and finite");
    }
  }
  return StarBody{std::move(grid), std::move(rho)};
}

ConvexSupportBody make_support_body(GridPtr grid, std::vector<double> h,
                                    SupportShape shape) {
  require_grid(grid);
  require_size(grid, h.size(), "support");
  for (double v : h) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DegenerateBody("support function must be positive (origin interior)");
    }
  }
  ConvexSupportBody body{std::move(grid), std::move(h), std::move(shape)};
  const bool closed = std::holds_alternative<BallShape>(body.shape) ||
                      std::holds_alternative<EllipsoidShape>(body.shape);
  if (body.dim() == 2 && !closed) {
    std::vector<double> f = planar_curvature(body);
    double fmin = *std::min_element(f.begin(), f.end());
    if (fmin < kConvexityMargin) {
      throw DegenerateBody("planar convexity margin violated (min h''+h = " +
                           std::to_string(fmin) + ")");
    }
  }
  return body;
}

ConvexSupportBody make_fourier_support(GridPtr grid,
                                       const FourierSupport& fourier) {
  require_grid(grid);
  if (grid->dim() != 2) {
    throw std::invalid_argument("Fourier support bodies are planar");
  }
  std::vector<double> h(grid->size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    h[j] = fourier.value(grid->angle(j));
  }
  return make_support_body(std::move(grid), std::move(h), fourier);
}

ConvexSupportBody make_ellipsoid_support(GridPtr grid,
                                         const Eigen::MatrixXd& A) {
  require_grid(grid);
  if (A.rows() != grid->dim()) {
    throw std::invalid_argument("matrix dimension does not match grid");
  }
  safe_det(A);
  std::vector<double> h(grid->size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    h[j] = (A.transpose() * grid->nodes().col(j)).norm();
  }
  return make_support_body(std::move(grid), std::move(h), EllipsoidShape{A});
}

SmoothBody make_ball(GridPtr grid, double r) {
  require_grid(grid);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("ball radius must be positive");
  }
  const std::size_t N = grid->size();
  const int n = grid->dim();
  SmoothBody body;
  body.support = make_support_body(grid, std::vector<double>(N, r),
                                   BallShape{r});
  body.f.assign(N, std::pow(r, n - 1));
  body.provenance = Provenance::kClosedForm;
  return body;
}

SmoothBody make_ellipsoid(GridPtr grid, const Eigen::MatrixXd& A) {
  require_grid(grid);
  const int n = grid->dim();
  const double det = safe_det(A);
  SmoothBody body;
  body.support = make_ellipsoid_support(grid, A);
  body.f.resize(grid->size());
  for (std::size_t j = 0; j < body.f.size(); ++j) {
    body.f[j] = det * det * std::pow(body.support.h[j], -(n + 1));
  }
  body.provenance = Provenance::kClosedForm;
  return body;
}

SmoothBody make_fourier_body(GridPtr grid, const FourierSupport& fourier) {
  return curvature_from_support(make_fourier_support(std::move(grid), fourier));
}

SmoothBody make_supplied_body(GridPtr grid, std::vector<double> h,
                              std::vector<double> f) {
  require_grid(grid);
  require_size(grid, f.size(), "curvature");
  for (double v : f) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DegenerateBody("curvature function must be positive");
    }
  }
  SmoothBody body;
  body.support = make_support_body(grid, std::move(h));
  body.f = std::move(f);
  body.provenance = Provenance::kSupplied;
  return body;
}

SmoothBody curvature_from_support(const ConvexSupportBody& body) {
  if (body.dim() != 2) {
    throw std::invalid_argument(
        "curvature from support is planar only; use closed-form or supplied "
        "bodies in higher dimensions");
  }
  SmoothBody out;
  out.support = body;
  out.f = planar_curvature(body);
  for (double v : out.f) {
    if (v < kConvexityMargin) {
      throw DegenerateBody("planar convexity margin violated");
    }
  }
  out.provenance = Provenance::kFromSupport;
  return out;
}

FieldInterpolator::FieldInterpolator(const SphereGrid& grid,
                                     std::span<const double> samples)
    : grid_(&grid), samples_(samples.begin(), samples.end()) {
  if (samples.size() != grid.size()) {
    throw std::invalid_argument("sample count does not match grid size");
  }
  if (grid.scheme() == GridScheme::kUniformCircle) {
    trig_.emplace_back(samples);
  } else if (grid.scheme() != GridScheme::kProductGauss) {
    throw std::invalid_argument(
        "off-grid interpolation is not available on Monte Carlo grids");
  }
}

double FieldInterpolator::at(const Eigen::VectorXd& u) const {
  if (!trig_.empty()) return trig_[0](std::atan2(u[1], u[0]));

  const auto& t = grid_->polar_nodes();
  const int nt = grid_->polar_count();
  const int na = grid_->azimuth_count();
  const double tz = std::clamp(u[2], -1.0, 1.0);
  // Polar nodes are stored in decreasing order.
  int nearest = 0;
  double dmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nt; ++i) {
    double d = std::abs(t[i] - tz);
    if (d < dmin) {
      dmin = d;
      nearest = i;
    }
  }
  const int i0 = std::clamp(nearest, 1, nt - 2);
  double lt[3];
  for (int a = 0; a < 3; ++a) {
    double num = 1.0, den = 1.0;
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      num *= tz - t[i0 - 1 + b];
      den *= t[i0 - 1 + a] - t[i0 - 1 + b];
    }
    lt[a] = num / den;
  }
  const double phi = wrap_angle(std::atan2(u[1], u[0]));
  const double kf = phi / (2.0 * kPi / na);
  const int k0 = static_cast<int>(std::lround(kf));
  const double s = kf - k0;
  const double lp[3] = {0.5 * s * (s - 1.0), 1.0 - s * s, 0.5 * s * (s + 1.0)};
  double sum = 0.0;
  for (int a = 0; a < 3; ++a) {
    const int it = i0 - 1 + a;
    for (int b = 0; b < 3; ++b) {
      const int ip = ((k0 - 1 + b) % na + na) % na;
      sum += lt[a] * lp[b] * samples_[static_cast<std::size_t>(it) * na + ip];
    }
  }
  return sum;
}

SupportEvaluator::SupportEvaluator(const ConvexSupportBody& body)
    : body_(&body) {
  if (std::holds_alternative<SampledShape>(body.shape)) {
    field_.emplace_back(*body.grid, body.h);
  }
}

double SupportEvaluator::operator()(const Eigen::VectorXd& x) const {
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  return std::visit(
      [&](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, BallShape>) {
          return shape.r * r;
        } else if constexpr (std::is_same_v<T, EllipsoidShape>) {
          return (shape.A.transpose() * x).norm();
        } else if constexpr (std::is_same_v<T, FourierSupport>) {
          return r * shape.value(std::atan2(x[1], x[0]));
        } else {
          return r * field_[0].at(x / r);
        }
      },
      body_->shape);
}

StarBody polar_radial(const ConvexSupportBody& body) {
  std::vector<double> rho(body.h.size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = 1.0 / body.h[j];
  return make_star_body(body.grid, std::move(rho));
}

ConvexSupportBody support_from_radial(const StarBody& star) {
  const auto& grid = *star.grid;
  const auto& nodes = grid.nodes();
  const std::size_t N = grid.size();
  std::vector<double> h(N);
  for (std::size_t i = 0; i < N; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < N; ++j) {
      double c = nodes.col(i).dot(nodes.col(j));
      if (c <= 0.0) continue;
      best = std::max(best, star.rho[j] * c);
    }
    if (!std::isfinite(best)) {
      throw std::runtime_error("no grid node in the open hemisphere");
    }
    h[i] = best;
  }
  // The hull of a sampled star need not meet the planar margin; keep the
  // samples without the convexity check.
  ConvexSupportBody out;
  out.grid = star.grid;
  out.h = std::move(h);
  out.shape = SampledShape{};
  return out;
}

StarBody radial_function(const ConvexSupportBody& body) {
  const auto& grid = *body.grid;
  const std::size_t N = grid.size();
  if (const auto* ball = std::get_if<BallShape>(&body.shape)) {
    return make_star_body(body.grid, std::vector<double>(N, ball->r));
  }
  if (const auto* ell = std::get_if<EllipsoidShape>(&body.shape)) {
    Eigen::MatrixXd inv = ell->A.inverse();
    std::vector<double> rho(N);
    for (std::size_t j = 0; j < N; ++j) {
      rho[j] = 1.0 / (inv * grid.nodes().col(j)).norm();
    }
    return make_star_body(body.grid, std::move(rho));
  }
  SupportEvaluator ev(body);
  return make_star_body(
      body.grid,
      radial_by_minimization(grid, body.h,
                             [&](const Eigen::VectorXd& x) { return ev(x); }));
}

StarBody radial_of_combination(std::span<const ConvexSupportBody> bodies,
                               std::span<const double> lambdas) {
  if (bodies.empty() || bodies.size() != lambdas.size()) {
    throw std::invalid_argument("one coefficient per body required");
  }
  const GridPtr& grid = bodies[0].grid;
  std::vector<SupportEvaluator> evs;
  evs.reserve(bodies.size());
  std::vector<double> h(grid->size(), 0.0);
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (!bodies[i].grid->same_as(*grid)) {
      throw std::invalid_argument("bodies live on different grids");
    }
    if (!(lambdas[i] >= 0.0)) {
      throw std::invalid_argument("combination coefficients must be >= 0");
    }
    evs.emplace_back(bodies[i]);
    for (std::size_t j = 0; j < h.size(); ++j) {
      h[j] += lambdas[i] * bodies[i].h[j];
    }
  }
  auto ev = [&](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < evs.size(); ++i) {
      if (lambdas[i] != 0.0) s += lambdas[i] * evs[i](x);
    }
    return s;
  };
  return make_star_body(grid, radial_by_minimization(*grid, h, ev));
}

SmoothBody polar_body(const SmoothBody& body) {
  const GridPtr& grid = body.grid();
  if (const auto* ball = std::get_if<BallShape>(&body.support.shape)) {
    return make_ball(grid, 1.0 / ball->r);
  }
  if (const auto* ell = std::get_if<EllipsoidShape>(&body.support.shape)) {
    return make_ellipsoid(grid, ell->A.inverse().transpose());
  }
  if (body.dim() != 2) {
    throw std::invalid_argument(
        "polar bodies of sampled bodies are planar only");
  }
  StarBody rho = radial_function(body.support);
  std::vector<double> h(rho.rho.size());
  for (std::size_t j = 0; j < h.size(); ++j) h[j] = 1.0 / rho.rho[j];
  return curvature_from_support(make_support_body(grid, std::move(h)));
}

SmoothBody apply_linear(const SmoothBody& body, const LinearMap& phi) {
  const GridPtr& grid = body.grid();
  const int n = grid->dim();
  if (phi.matrix.rows() != n) {
    throw std::invalid_argument("linear map dimension mismatch");
  }
  if (const auto* ball = std::get_if<BallShape>(&body.support.shape)) {
    return make_ellipsoid(grid, ball->r * phi.matrix);
  }
  if (const auto* ell = std::get_if<EllipsoidShape>(&body.support.shape)) {
    return make_ellipsoid(grid, phi.matrix * ell->A);
  }
  if (grid->scheme() == GridScheme::kMonteCarlo) {
    throw std::invalid_argument(
        "linear images of sampled bodies need a structured grid");
  }
  SupportEvaluator hk(body.support);
  const FourierSupport* fs = body.support.fourier();
  std::unique_ptr<FieldInterpolator> fk;
  if (!fs) fk = std::make_unique<FieldInterpolator>(*grid, body.f);
  const Eigen::MatrixXd phit = phi.matrix.transpose();
  const double det2 = phi.det_abs * phi.det_abs;
  std::vector<double> h(grid->size()), f(grid->size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    Eigen::VectorXd w = phit * grid->nodes().col(j);
    const double wn = w.norm();
    Eigen::VectorXd u = w / wn;
    h[j] = hk(w);
    double fu = fs ? fs->curvature(std::atan2(u[1], u[0])) : fk->at(u);
    f[j] = det2 * fu / std::pow(wn, n + 1);
  }
  return make_supplied_body(grid, std::move(h), std::move(f));
}

StarBody apply_linear(const StarBody& body, const LinearMap& phi) {
  const auto& grid = *body.grid;
  if (phi.matrix.rows() != grid.dim()) {
    throw std::invalid_argument("linear map dimension mismatch");
  }
  FieldInterpolator rho(grid, body.rho);
  Eigen::MatrixXd inv = phi.matrix.inverse();
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    Eigen::VectorXd w = inv * grid.nodes().col(j);
    const double wn = w.norm();
    out[j] = rho.at(w / wn) / wn;
  }
  return make_star_body(body.grid, std::move(out));
}

ConvexSupportBody dilate(const ConvexSupportBody& body, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("dilation factor must be > 0");
  ConvexSupportBody out = body;
  for (double& v : out.h) v *= r;
  std::visit(
      [&](auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, BallShape>) {
          shape.r *= r;
        } else if constexpr (std::is_same_v<T, EllipsoidShape>) {
          shape.A *= r;
        } else if constexpr (std::is_same_v<T, FourierSupport>) {
          shape.c0 *= r;
          for (double& c : shape.a) c *= r;
          for (double& c : shape.b) c *= r;
        }
      },
      out.shape);
  return out;
}

SmoothBody dilate(const SmoothBody& body, double r) {
  SmoothBody out = body;
  out.support = dilate(body.support, r);
  const double s = std::pow(r, body.dim() - 1);
  for (double& v : out.f) v *= s;
  return out;
}

StarBody dilate(const StarBody& body, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("dilation factor must be > 0");
  StarBody out = body;
  for (double& v : out.rho) v *= r;
  return out;
}

Eigen::VectorXd centroid(const SmoothBody& body) {
  const auto& grid = *body.grid();
  const int n = grid.dim();
  StarBody rho = radial_function(body.support);
  const auto& w = grid.weights();
  double vol = 0.0;
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(n);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double rn = std::pow(rho.rho[j], n);
    vol += w[j] * rn;
    moment += w[j] * rn * rho.rho[j] * grid.nodes().col(j);
  }
  vol /= n;
  return moment / ((n + 1) * vol);
}

SmoothBody recenter(const SmoothBody& body) {
  SmoothBody current = body;
  const auto& grid = *body.grid();
  for (int pass = 0; pass < 50; ++pass) {
    Eigen::VectorXd c = centroid(current);
    if (c.norm() < 1e-8) return current;
    std::vector<double> h = current.support.h;
    for (std::size_t j = 0; j < h.size(); ++j) {
      h[j] -= c.dot(grid.nodes().col(j));
      if (!(h[j] > 0.0)) {
        throw DegenerateBody("recentering moves the origin outside the body");
      }
    }
    SupportShape shape = SampledShape{};
    if (const FourierSupport* fs = current.support.fourier()) {
      FourierSupport moved = *fs;
      if (moved.a.empty()) moved.a.assign(1, 0.0);
      if (moved.b.empty()) moved.b.assign(1, 0.0);
      moved.a[0] -= c[0];
      moved.b[0] -= c[1];
      shape = moved;
    }
    ConvexSupportBody support{current.grid(), std::move(h), std::move(shape)};
    if (current.provenance == Provenance::kFromSupport) {
      current = curvature_from_support(support);
    } else {
      // f is translation invariant.
      current.support = std::move(support);
      if (current.provenance == Provenance::kClosedForm) {
        current.provenance = Provenance::kSupplied;
      }
    }
  }
  throw DegenerateBody("recentering did not converge in 50 passes");
}

SmoothBody random_smooth_body(GridPtr grid, std::uint64_t seed, int k_max,
                              double margin) {
  require_grid(grid);
  if (grid->dim() != 2) {
    throw std::invalid_argument("random smooth bodies are planar");
  }
  if (k_max < 2) throw std::invalid_argument("k_max must be >= 2");
  if (!(margin > 0.0 && margin < 1.0)) {
    throw std::invalid_argument("margin must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.35, 0.95);
  FourierSupport fs;
  fs.c0 = 1.0;
  fs.a.assign(k_max, 0.0);
  fs.b.assign(k_max, 0.0);
  for (int k = 2; k <= k_max; ++k) {
    fs.a[k - 1] = normal(rng) / k;
    fs.b[k - 1] = normal(rng) / k;
  }
  const double amplitude = unit(rng);

  const int check = std::max<int>(4096, 8 * static_cast<int>(grid->size()));
  double hmin = 0.0, fmin = 0.0;
  for (int j = 0; j < check; ++j) {
    const double t = 2.0 * kPi * j / check;
    double gh = 0.0, gf = 0.0;
    for (int k = 2; k <= k_max; ++k) {
      const double v = fs.a[k - 1] * std::cos(k * t) + fs.b[k - 1] * std::sin(k * t);
      gh += v;
      gf += (1.0 - static_cast<double>(k) * k) * v;
    }
    hmin = std::min(hmin, gh);
    fmin = std::min(fmin, gf);
  }
  double smax = std::numeric_limits<double>::infinity();
  if (hmin < 0.0) smax = std::min(smax, (1.0 - margin) / -hmin);
  if (fmin < 0.0) smax = std::min(smax, (1.0 - margin) / -fmin);
  if (!std::isfinite(smax)) smax = 0.0;
  const double s = amplitude * smax;
  for (double& c : fs.a) c *= s;
  for (double& c : fs.b) c *= s;
  return make_fourier_body(std::move(grid), fs);
}

StarBody random_star_body(GridPtr grid, std::uint64_t seed, int k_max,
                          double amplitude) {
  require_grid(grid);
  if (grid->dim() != 2) {
    throw std::invalid_argument("random star bodies are planar");
  }
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.3, 1.0);
  std::vector<double> a(k_max + 1), b(k_max + 1);
  for (int k = 1; k <= k_max; ++k) {
    a[k] = normal(rng) / k;
    b[k] = normal(rng) / k;
  }
  const double scale = amplitude * unit(rng);
  std::vector<double> g(grid->size());
  double gmax = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = grid->angle(j);
    double v = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      v += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
    }
    g[j] = v;
    gmax = std::max(gmax, std::abs(v));
  }
  std::vector<double> rho(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    rho[j] = std::exp(gmax > 0.0 ? scale * g[j] / gmax : 0.0);
  }
  return make_star_body(std::move(grid), std::move(rho));
}

Eigen::MatrixXd random_linear_matrix(std::mt19937_64& rng, int dim,
                                     double max_log_stretch,
                                     bool unit_determinant) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> stretch(-max_log_stretch,
                                                 max_log_stretch);
  auto orthogonal = [&]() {
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
      if (r(i, i) < 0) q.col(i) *= -1.0;
    }
    return q;
  };
  Eigen::MatrixXd q1 = orthogonal();
  Eigen::MatrixXd q2 = orthogonal();
  Eigen::VectorXd s(dim);
  for (int i = 0; i < dim; ++i) s[i] = stretch(rng);
  if (unit_determinant) {
    s.array() -= s.mean();
    if ((q1 * q2).determinant() < 0) q1.col(0) *= -1.0;
  }
  return q1 * s.array().exp().matrix().asDiagonal() * q2;
}

}  // namespace geokit
