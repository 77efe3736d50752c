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

#include "geokit/sphere.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace geokit {
namespace {

constexpr double kPi = std::numbers::pi;

// FFTW plans are created under a lock; execution on fresh fftw_malloc
// buffers is thread-safe.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  fftw_plan forward(int m) { return get(m, true); }
  fftw_plan backward(int m) { return get(m, false); }

 private:
  fftw_plan get(int m, bool forward) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& cache = forward ? forward_ : backward_;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    double* re = fftw_alloc_real(m);
    fftw_complex* c = fftw_alloc_complex(m / 2 + 1);
    fftw_plan plan = forward
                         ? fftw_plan_dft_r2c_1d(m, re, c, FFTW_ESTIMATE)
                         : fftw_plan_dft_c2r_1d(m, c, re, FFTW_ESTIMATE);
    fftw_free(re);
    fftw_free(c);
    cache.emplace(m, plan);
    return plan;
  }

  std::mutex mu_;
  std::map<int, fftw_plan> forward_;
  std::map<int, fftw_plan> backward_;
};

struct FftBuffers {
  explicit FftBuffers(int m)
      : re(fftw_alloc_real(m)), c(fftw_alloc_complex(m / 2 + 1)) {}
  ~FftBuffers() {
    fftw_free(re);
    fftw_free(c);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;
  double* re;
  fftw_complex* c;
};

void check_samples(const SphereGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) {
    throw std::invalid_argument("sample count does not match grid size");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite sample");
  }
}

void gauss_legendre(int count, std::vector<double>& x, std::vector<double>& w) {
  x.assign(count, 0.0);
  w.assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= count; ++k) {
        double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = count * (t * p1 - p0) / (t * t - 1.0);
      double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= count; ++k) {
      double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = count * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

std::string to_string(GridScheme scheme) {
  switch (scheme) {
    case GridScheme::kUniformCircle:
      return "uniform-circle";
    case GridScheme::kProductGauss:
      return "product-gauss";
    case GridScheme::kMonteCarlo:
      return "monte-carlo";
  }
  return "unknown";
}

double sphere_area(int n) {
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

SphereGrid::SphereGrid(int dim, int resolution, GridScheme scheme,
                       std::uint64_t seed, Eigen::MatrixXd nodes,
                       std::vector<double> weights)
    : dim_(dim),
      resolution_(resolution),
      scheme_(scheme),
      seed_(seed),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)) {}

double SphereGrid::angle(std::size_t j) const {
  if (scheme_ != GridScheme::kUniformCircle) {
    throw std::logic_error("angle() requires a uniform-circle grid");
  }
  return 2.0 * kPi * static_cast<double>(j) / static_cast<double>(size());
}

std::string SphereGrid::exactness() const {
  switch (scheme_) {
    case GridScheme::kUniformCircle:
      return "trigonometric degree < " + std::to_string(resolution_);
    case GridScheme::kProductGauss:
      return "polynomial degree <= " + std::to_string(2 * polar_count_ - 1) +
             " in cos(polar) x trigonometric degree < " +
             std::to_string(azimuth_count_);
    case GridScheme::kMonteCarlo:
      return "statistical";
  }
  return "";
}

bool SphereGrid::same_as(const SphereGrid& other) const {
  if (this == &other) return true;
  return dim_ == other.dim_ && resolution_ == other.resolution_ &&
         scheme_ == other.scheme_ && seed_ == other.seed_;
}

void SphereGrid::set_product_structure(int polar_count, int azimuth_count,
                                       std::vector<double> polar_nodes) {
  polar_count_ = polar_count;
  azimuth_count_ = azimuth_count;
  polar_nodes_ = std::move(polar_nodes);
}

GridPtr build_grid(int dim, int resolution, GridScheme scheme,
                   std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("grid dimension must be >= 2");
  if (resolution < 8) throw std::invalid_argument("resolution must be >= 8");

  switch (scheme) {
    case GridScheme::kUniformCircle: {
      if (dim != 2) {
        throw std::invalid_argument("uniform-circle requires dim = 2");
      }
      if (resolution % 2 != 0) {
        throw std::invalid_argument("uniform-circle needs an even node count");
      }
      Eigen::MatrixXd nodes(2, resolution);
      for (int j = 0; j < resolution; ++j) {
        double t = 2.0 * kPi * j / resolution;
        nodes(0, j) = std::cos(t);
        nodes(1, j) = std::sin(t);
      }
      std::vector<double> w(resolution, 2.0 * kPi / resolution);
      return std::make_shared<SphereGrid>(dim, resolution, scheme, seed,
                                          std::move(nodes), std::move(w));
    }
    case GridScheme::kProductGauss: {
      if (dim != 3) {
        throw std::invalid_argument("product-gauss requires dim = 3");
      }
      if (resolution % 2 != 0) {
        throw std::invalid_argument("product-gauss needs an even resolution");
      }
      const int na = resolution;
      const int nt = resolution / 2;
      std::vector<double> t, wt;
      gauss_legendre(nt, t, wt);
      Eigen::MatrixXd nodes(3, nt * na);
      std::vector<double> w(static_cast<std::size_t>(nt) * na);
      for (int it = 0; it < nt; ++it) {
        double s = std::sqrt(std::max(0.0, 1.0 - t[it] * t[it]));
        for (int ip = 0; ip < na; ++ip) {
          double phi = 2.0 * kPi * ip / na;
          int j = it * na + ip;
          nodes(0, j) = s * std::cos(phi);
          nodes(1, j) = s * std::sin(phi);
          nodes(2, j) = t[it];
          w[j] = wt[it] * 2.0 * kPi / na;
        }
      }
      auto grid = std::make_shared<SphereGrid>(dim, resolution, scheme, seed,
                                               std::move(nodes), std::move(w));
      grid->set_product_structure(nt, na, std::move(t));
      return grid;
    }
    case GridScheme::kMonteCarlo: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::MatrixXd nodes(dim, resolution);
      for (int j = 0; j < resolution; ++j) {
        double norm = 0.0;
        do {
          for (int k = 0; k < dim; ++k) nodes(k, j) = normal(rng);
          norm = nodes.col(j).norm();
        } while (norm < 1e-12);
        nodes.col(j) /= norm;
      }
      std::vector<double> w(resolution, sphere_area(dim) / resolution);
      return std::make_shared<SphereGrid>(dim, resolution, scheme, seed,
                                          std::move(nodes), std::move(w));
    }
  }
  throw std::invalid_argument("unsupported grid scheme");
}

GridPtr build_default_grid(int dim, int resolution, std::uint64_t seed) {
  if (dim == 2) return build_grid(2, resolution, GridScheme::kUniformCircle);
  if (dim == 3) return build_grid(3, resolution, GridScheme::kProductGauss);
  return build_grid(dim, resolution, GridScheme::kMonteCarlo, seed);
}

GridPtr refine_grid(const SphereGrid& grid) {
  return build_grid(grid.dim(), 2 * grid.resolution(), grid.scheme(),
                    grid.seed());
}

double integrate(const SphereGrid& grid, std::span<const double> samples) {
  check_samples(grid, samples);
  const auto& w = grid.weights();
  double sum = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) sum += w[j] * samples[j];
  return sum;
}

Quadrature integrate_with_error(const SphereGrid& grid,
                                std::span<const double> samples) {
  check_samples(grid, samples);
  const auto& w = grid.weights();
  const std::size_t n = samples.size();
  double full = 0.0;
  double magnitude = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    full += w[j] * samples[j];
    magnitude += std::abs(w[j] * samples[j]);
  }
  double err = 0.0;
  switch (grid.scheme()) {
    case GridScheme::kUniformCircle: {
      double half = 0.0;
      for (std::size_t j = 0; j < n; j += 2) half += 2.0 * w[j] * samples[j];
      err = std::abs(full - half);
      break;
    }
    case GridScheme::kProductGauss: {
      double half = 0.0;
      const std::size_t na = grid.azimuth_count();
      for (std::size_t j = 0; j < n; ++j) {
        if ((j % na) % 2 == 0) half += 2.0 * w[j] * samples[j];
      }
      err = std::abs(full - half);
      break;
    }
    case GridScheme::kMonteCarlo: {
      double mean = full / sphere_area(grid.dim());
      double var = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double d = samples[j] - mean;
        var += d * d;
      }
      var /= static_cast<double>(n > 1 ? n - 1 : 1);
      err = 3.0 * sphere_area(grid.dim()) * std::sqrt(var / n);
      break;
    }
  }
  const double floor = 1e-13 * magnitude;
  return {full, err + floor};
}

std::vector<double> differentiate_periodic(std::span<const double> samples,
                                           int order) {
  const int m = static_cast<int>(samples.size());
  if (m == 0 || m % 2 != 0) {
    throw std::invalid_argument("periodic differentiation needs even length");
  }
  if (order != 1 && order != 2) {
    throw std::invalid_argument("derivative order must be 1 or 2");
  }
  FftBuffers buf(m);
  for (int j = 0; j < m; ++j) buf.re[j] = samples[j];
  fftw_execute_dft_r2c(FftPlans::instance().forward(m), buf.re, buf.c);
  for (int k = 0; k <= m / 2; ++k) {
    std::complex<double> c(buf.c[k][0], buf.c[k][1]);
    if (order == 1) {
      c *= std::complex<double>(0.0, k);
      if (k == m / 2) c = 0.0;
    } else {
      c *= -static_cast<double>(k) * k;
    }
    buf.c[k][0] = c.real() / m;
    buf.c[k][1] = c.imag() / m;
  }
  fftw_execute_dft_c2r(FftPlans::instance().backward(m), buf.c, buf.re);
  return std::vector<double>(buf.re, buf.re + m);
}

TrigInterpolant::TrigInterpolant(std::span<const double> samples) {
  const int m = static_cast<int>(samples.size());
  if (m == 0 || m % 2 != 0) {
    throw std::invalid_argument("trigonometric interpolation needs even length");
  }
  FftBuffers buf(m);
  for (int j = 0; j < m; ++j) buf.re[j] = samples[j];
  fftw_execute_dft_r2c(FftPlans::instance().forward(m), buf.re, buf.c);
  a_.assign(m / 2 + 1, 0.0);
  b_.assign(m / 2 + 1, 0.0);
  a_[0] = buf.c[0][0] / m;
  for (int k = 1; k < m / 2; ++k) {
    a_[k] = 2.0 * buf.c[k][0] / m;
    b_[k] = -2.0 * buf.c[k][1] / m;
  }
  a_[m / 2] = buf.c[m / 2][0] / m;
}

double TrigInterpolant::eval(double theta, int order) const {
  const std::size_t kn = a_.size() - 1;
  const std::complex<double> step(std::cos(theta), std::sin(theta));
  std::complex<double> e(1.0, 0.0);
  double sum = order == 0 ? a_[0] : 0.0;
  for (std::size_t k = 1; k <= kn; ++k) {
    e *= step;
    // Re-anchor the rotation periodically to limit drift.
    if (k % 32 == 0) e = std::polar(1.0, static_cast<double>(k) * theta);
    const double c = e.real(), s = e.imag();
    const double kk = static_cast<double>(k);
    const double ak = a_[k], bk = b_[k];
    switch (order) {
      case 0:
        sum += ak * c + bk * s;
        break;
      case 1:
        if (k != kn) sum += kk * (bk * c - ak * s);
        break;
      default:
        sum -= kk * kk * (ak * c + bk * s);
        break;
    }
  }
  return sum;
}

}  // namespace geokit
