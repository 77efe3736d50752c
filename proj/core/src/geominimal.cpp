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

#include "geokit/geominimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "geokit/nelder_mead.hpp"
#include "mix.hpp"

namespace geokit {
namespace {

using detail::guarded_pow;
using detail::require_same_grid;

constexpr double kInf = std::numeric_limits<double>::infinity();
// log(1e6): ascent gain after which the as_p^{(1)} search is reported unbounded.
constexpr double kUnboundedLogGain = 13.815510557964274;

using LogFields = std::vector<std::vector<double>>;

// The shared shape of every geominimal objective:
//   n * A^{n/(n+p)} * P,   A = (1/n) int F prod_k h_k^{p e_k},
// with P the alpha-dependent polar factor. alpha = 1 has one slot.
struct Problem {
  GridPtr grid;
  int n = 0;
  double p = 0.0;
  int alpha = 1;
  std::string id;
  std::optional<double> i;
  std::vector<double> F;
  std::vector<double> e;
  // Per-slot closed-form start candidates (h up to scale).
  std::vector<std::vector<double>> decoupled;

  int slots() const { return alpha == 1 ? 1 : static_cast<int>(e.size()); }
  int slot_of(std::size_t k) const { return alpha == 1 ? 0 : static_cast<int>(k); }

  // p = 0 value and the V_{p,n}-style h_Q candidate.
  std::vector<double> h_q() const {
    std::vector<double> h(F.size());
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = guarded_pow(F[j], -1.0 / (n + p));
    return h;
  }

  double value(const LogFields& logh) const {
    const auto& w = grid->weights();
    const std::size_t N = F.size();
    const std::size_t m = e.size();
    double A = 0.0, P3 = 0.0;
    std::vector<double> Pk(slots(), 0.0);
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += e[k] * logh[slot_of(k)][j];
      A += w[j] * F[j] * std::exp(p * s);
      if (alpha == 3) {
        P3 += w[j] * std::exp(-n * s);
      } else {
        for (int k = 0; k < slots(); ++k) Pk[k] += w[j] * std::exp(-n * logh[k][j]);
      }
    }
    A /= n;
    double P = 1.0;
    if (alpha == 3) {
      P = std::pow(P3 / n, p / (n + p));
    } else if (alpha == 1) {
      P = std::pow(Pk[0] / n, p / (n + p));
    } else {
      for (std::size_t k = 0; k < m; ++k) P *= std::pow(Pk[k] / n, p * e[k] / (n + p));
    }
    const double v = n * std::pow(A, n / (n + p)) * P;
    return std::isfinite(v) && v > 0 ? v : std::numeric_limits<double>::quiet_NaN();
  }

  FunctionalValue value_with_error(const LogFields& logh) const {
    const std::size_t N = F.size();
    const std::size_t m = e.size();
    std::vector<double> a(N), p3(N);
    std::vector<std::vector<double>> pk(slots(), std::vector<double>(N));
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += e[k] * logh[slot_of(k)][j];
      a[j] = F[j] * std::exp(p * s);
      p3[j] = std::exp(-n * s);
      for (int k = 0; k < slots(); ++k) pk[k][j] = std::exp(-n * logh[k][j]);
    }
    Quadrature qa = integrate_with_error(*grid, a);
    double value = n * std::pow(qa.value / n, n / (n + p));
    double rel = std::abs(n / (n + p)) * qa.err / qa.value;
    auto polar = [&](const std::vector<double>& g, double expo) {
      Quadrature q = integrate_with_error(*grid, g);
      value *= std::pow(q.value / n, expo);
      rel += std::abs(expo) * q.err / q.value;
    };
    if (alpha == 3) {
      polar(p3, p / (n + p));
    } else if (alpha == 1) {
      polar(pk[0], p / (n + p));
    } else {
      for (std::size_t k = 0; k < m; ++k) polar(pk[k], p * e[k] / (n + p));
    }
    FunctionalValue out;
    out.value = value;
    out.err = rel * value;
    out.kind = p >= 0 ? ValueKind::kUpperBound : ValueKind::kLowerBound;
    out.meta.id = id;
    out.meta.p = p;
    out.meta.i = i;
    out.meta.resolution = grid->resolution();
    return out;
  }

  FunctionalValue closed_form_zero() const {
    Quadrature q = integrate_with_error(*grid, F);
    FunctionalValue out;
    out.value = q.value;
    out.err = q.err;
    out.kind = ValueKind::kQuadrature;
    out.meta.id = id;
    out.meta.p = p;
    out.meta.i = i;
    out.meta.resolution = grid->resolution();
    return out;
  }
};

std::vector<double> decoupled_candidate(const SmoothBody& K, double p) {
  const int n = K.dim();
  std::vector<double> fp = lp_curvature(K, p);
  for (double& v : fp) v = guarded_pow(v, -1.0 / (n + p));
  return fp;
}

Problem main_problem(int alpha, std::span<const SmoothBody> Ks, double p) {
  if (alpha < 1 || alpha > 3) throw std::invalid_argument("alpha must be 1, 2 or 3");
  if (Ks.empty()) throw std::invalid_argument("no bodies");
  const int n = Ks[0].dim();
  if (static_cast<int>(Ks.size()) != n) {
    throw std::invalid_argument("body count must equal the dimension");
  }
  PExponent pe(p, n);
  Problem pr;
  pr.grid = Ks[0].grid();
  pr.n = n;
  pr.p = p;
  pr.alpha = alpha;
  pr.id = "estimate_G";
  pr.F.assign(pr.grid->size(), 1.0);
  pr.e.assign(n, 1.0 / n);
  for (const auto& K : Ks) {
    require_same_grid(*pr.grid, *K.grid());
    std::vector<double> fp = lp_curvature(K, p);
    for (std::size_t j = 0; j < fp.size(); ++j) pr.F[j] *= guarded_pow(fp[j], 1.0 / n);
    if (p != 0.0) pr.decoupled.push_back(decoupled_candidate(K, p));
  }
  return pr;
}

Problem ith_problem(int alpha, const SmoothBody& K, const SmoothBody& L,
                    double p, double i) {
  if (alpha < 1 || alpha > 3) throw std::invalid_argument("alpha must be 1, 2 or 3");
  require_same_grid(*K.grid(), *L.grid());
  const int n = K.dim();
  PExponent pe(p, n);
  if (!std::isfinite(i)) throw std::invalid_argument("i must be finite");
  Problem pr;
  pr.grid = K.grid();
  pr.n = n;
  pr.p = p;
  pr.alpha = alpha;
  pr.id = "estimate_G_i";
  pr.i = i;
  pr.e = {(n - i) / n, i / n};
  std::vector<double> fk = lp_curvature(K, p), fl = lp_curvature(L, p);
  pr.F.resize(fk.size());
  for (std::size_t j = 0; j < fk.size(); ++j) {
    pr.F[j] = guarded_pow(fk[j], pr.e[0]) * guarded_pow(fl[j], pr.e[1]);
  }
  if (p != 0.0) {
    pr.decoupled.push_back(decoupled_candidate(K, p));
    pr.decoupled.push_back(decoupled_candidate(L, p));
  }
  return pr;
}

Problem tilde_problem(const SmoothBody& K, double p) {
  PExponent pe(p, K.dim());
  Problem pr;
  pr.grid = K.grid();
  pr.n = K.dim();
  pr.p = p;
  pr.alpha = 1;
  pr.id = "estimate_G_tilde";
  pr.F = lp_curvature(K, p);
  pr.e = {1.0};
  if (p != 0.0) pr.decoupled.push_back(decoupled_candidate(K, p));
  return pr;
}

bool fourier_feasible(const FourierSupport& fs, const std::vector<double>& cos_t,
                      const std::vector<double>& sin_t, std::size_t nodes,
                      int k_max) {
  for (std::size_t j = 0; j < nodes; ++j) {
    double h = fs.c0, f = fs.c0;
    for (int k = 1; k <= k_max; ++k) {
      const double t = fs.coeff_a(k) * cos_t[j * k_max + k - 1] +
                       fs.coeff_b(k) * sin_t[j * k_max + k - 1];
      h += t;
      f += (1.0 - static_cast<double>(k) * k) * t;
    }
    if (!(h >= kConvexityMargin) || !(f >= kConvexityMargin)) return false;
  }
  return true;
}

void fill_table(std::size_t nodes, int k_max, std::vector<double>& c,
                std::vector<double>& s) {
  c.resize(nodes * k_max);
  s.resize(nodes * k_max);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(nodes);
    for (int k = 1; k <= k_max; ++k) {
      c[j * k_max + k - 1] = std::cos(k * theta);
      s[j * k_max + k - 1] = std::sin(k * theta);
    }
  }
}

// Parameter vector <-> competitor supports for one family.
class Space {
 public:
  Space(Family family, GridPtr grid, int k_max, int slots)
      : family_(family), grid_(std::move(grid)), k_(k_max), slots_(slots) {
    n_ = grid_->dim();
    if (family_ == Family::kFourier) {
      if (n_ != 2 || grid_->scheme() != GridScheme::kUniformCircle) {
        throw std::invalid_argument("fourier-support competitors are planar");
      }
      per_slot_ = 2 * k_;
      fill_table(grid_->size(), k_, cos_, sin_);
      std::size_t check = grid_->size();
      while (check < 512) check *= 2;
      check_nodes_ = check;
      fill_table(check, k_, cos_check_, sin_check_);
    } else if (family_ == Family::kEllipsoid) {
      per_slot_ = n_ * (n_ + 1) / 2;
    } else {
      throw std::invalid_argument(
          "radial-grid competitors are only admissible for as_p^(1)");
    }
  }

  int dim() const { return per_slot_ * slots_; }

  FourierSupport fourier(const Eigen::VectorXd& x, int slot) const {
    FourierSupport fs;
    fs.c0 = 1.0;
    fs.a.resize(k_);
    fs.b.resize(k_);
    for (int k = 0; k < k_; ++k) {
      fs.a[k] = x[slot * per_slot_ + k];
      fs.b[k] = x[slot * per_slot_ + k_ + k];
    }
    return fs;
  }

  Eigen::MatrixXd factor(const Eigen::VectorXd& x, int slot) const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_, n_);
    int idx = slot * per_slot_;
    for (int r = 0; r < n_; ++r) {
      for (int c = 0; c <= r; ++c) {
        L(r, c) = r == c ? std::exp(x[idx]) : x[idx];
        ++idx;
      }
    }
    return L;
  }

  bool decode(const Eigen::VectorXd& x, LogFields& logh) const {
    logh.resize(slots_);
    const std::size_t N = grid_->size();
    for (int s = 0; s < slots_; ++s) {
      logh[s].resize(N);
      if (family_ == Family::kFourier) {
        FourierSupport fs = fourier(x, s);
        if (!fourier_feasible(fs, cos_check_, sin_check_, check_nodes_, k_)) {
          return false;
        }
        for (std::size_t j = 0; j < N; ++j) {
          double h = 1.0;
          for (int k = 0; k < k_; ++k) {
            h += fs.a[k] * cos_[j * k_ + k] + fs.b[k] * sin_[j * k_ + k];
          }
          logh[s][j] = std::log(h);
        }
      } else {
        for (int q = 0; q < per_slot_; ++q) {
          if (!std::isfinite(x[s * per_slot_ + q]) || std::abs(x[s * per_slot_ + q]) > 40) {
            return false;
          }
        }
        Eigen::MatrixXd H = factor(x, s).transpose() * grid_->nodes();
        for (std::size_t j = 0; j < N; ++j) logh[s][j] = std::log(H.col(j).norm());
      }
    }
    return true;
  }

  ConvexSupportBody body(const Eigen::VectorXd& x, int slot) const {
    if (family_ == Family::kFourier) return make_fourier_support(grid_, fourier(x, slot));
    return make_ellipsoid_support(grid_, factor(x, slot));
  }

  // Writes the fit of sampled h into one slot; always yields a feasible
  // point.
  void encode(std::span<const double> h, int slot, Eigen::VectorXd& x) const {
    if (family_ == Family::kFourier) {
      FourierSupport fs = fit_fourier_competitor(h, k_);
      for (int k = 0; k < k_; ++k) {
        x[slot * per_slot_ + k] = fs.coeff_a(k + 1);
        x[slot * per_slot_ + k_ + k] = fs.coeff_b(k + 1);
      }
      // fit_fourier_competitor guarantees feasibility on the fine check
      // grid; re-verify against this space's table.
      FourierSupport check = fourier(x, slot);
      double t = 1.0;
      while (!fourier_feasible(check, cos_check_, sin_check_, check_nodes_, k_) &&
             t > 1e-6) {
        t *= 0.5;
        for (int k = 0; k < k_; ++k) {
          check.a[k] = t * fs.coeff_a(k + 1);
          check.b[k] = t * fs.coeff_b(k + 1);
        }
      }
      if (t <= 1e-6) {
        std::fill(check.a.begin(), check.a.end(), 0.0);
        std::fill(check.b.begin(), check.b.end(), 0.0);
      }
      for (int k = 0; k < k_; ++k) {
        x[slot * per_slot_ + k] = check.a[k];
        x[slot * per_slot_ + k_ + k] = check.b[k];
      }
    } else {
      Eigen::MatrixXd L = fit_ellipsoid_competitor(*grid_, h);
      int idx = slot * per_slot_;
      for (int r = 0; r < n_; ++r) {
        for (int c = 0; c <= r; ++c) {
          x[idx++] = r == c ? std::log(L(r, r)) : L(r, c);
        }
      }
    }
  }

 private:
  Family family_;
  GridPtr grid_;
  int k_;
  int slots_;
  int n_ = 0;
  int per_slot_ = 0;
  std::vector<double> cos_, sin_, cos_check_, sin_check_;
  std::size_t check_nodes_ = 0;
};

LogFields logs_of(std::span<const ConvexSupportBody> bodies) {
  LogFields out;
  for (const auto& b : bodies) {
    std::vector<double> l(b.h.size());
    for (std::size_t j = 0; j < l.size(); ++j) l[j] = std::log(guarded_pow(b.h[j], 1.0));
    out.push_back(std::move(l));
  }
  return out;
}

struct Start {
  std::string origin;
  Eigen::VectorXd x;
};

GeoEstimate run_search(const Problem& pr, const SearchConfig& cfg) {
  cfg.validate();
  GeoEstimate est;
  est.alpha = pr.alpha;
  if (pr.p == 0.0) {
    est.value = pr.closed_form_zero();
    est.source = "closed-form";
    return est;
  }
  const double sign = pr.p >= 0 ? 1.0 : -1.0;
  const int slots = pr.slots();
  Space space(cfg.family, pr.grid, cfg.k_max, slots);

  double best = kInf;  // in minimized (signed) units
  Eigen::VectorXd best_x;
  std::vector<ConvexSupportBody> best_seed;
  std::string best_origin;

  auto signed_value = [&](const LogFields& logh) {
    const double v = pr.value(logh);
    return std::isfinite(v) ? sign * v : kInf;
  };
  LogFields scratch;
  auto f = [&](const Eigen::VectorXd& x) {
    if (!space.decode(x, scratch)) return kInf;
    return signed_value(scratch);
  };

  // Seeds: exact evaluation of the supplied bodies, and their fits as starts.
  std::vector<Start> seed_starts;
  for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
    const auto& tuple = cfg.seeds[si];
    std::vector<std::vector<ConvexSupportBody>> candidates;
    if (static_cast<int>(tuple.size()) == slots) {
      candidates.push_back(tuple);
    } else if (tuple.size() == 1) {
      candidates.emplace_back(slots, tuple[0]);
    } else if (slots == 1) {
      for (const auto& b : tuple) candidates.push_back({b});
    } else {
      throw std::invalid_argument("seed tuple size does not match competitor slots");
    }
    for (const auto& cand : candidates) {
      for (const auto& b : cand) require_same_grid(*pr.grid, *b.grid);
      const double v = signed_value(logs_of(cand));
      const std::string origin = "seed:" + std::to_string(si);
      est.trace.push_back({-1, origin, sign * v, sign * v, 0, true});
      if (v < best) {
        best = v;
        best_seed = cand;
        best_origin = origin;
      }
      Eigen::VectorXd x = Eigen::VectorXd::Zero(space.dim());
      for (int s = 0; s < slots; ++s) space.encode(cand[s].h, s, x);
      seed_starts.push_back({origin, x});
    }
  }

  // Closed-form candidates as sampled convex bodies, when admissible.
  if (pr.grid->dim() == 2) {
    auto try_candidate = [&](std::vector<std::vector<double>> hs,
                             const std::string& origin) {
      std::vector<ConvexSupportBody> cand;
      try {
        for (auto& h : hs) {
          const double top = *std::max_element(h.begin(), h.end());
          for (double& v : h) v /= top;
          cand.push_back(make_support_body(pr.grid, std::move(h)));
        }
      } catch (const DegenerateBody&) {
        return;
      } catch (const std::domain_error&) {
        return;
      }
      const double v = signed_value(logs_of(cand));
      est.trace.push_back({-1, origin, sign * v, sign * v, 0, true});
      if (v < best) {
        best = v;
        best_seed = std::move(cand);
        best_origin = origin;
      }
    };
    try_candidate(std::vector<std::vector<double>>(slots, pr.h_q()), "h_q:sampled");
    if (slots == 1) {
      for (std::size_t k = 0; k < pr.decoupled.size(); ++k) {
        try_candidate({pr.decoupled[k]}, "decoupled:" + std::to_string(k) + ":sampled");
      }
    } else {
      try_candidate(pr.decoupled, "decoupled:sampled");
    }
  }

  std::vector<Start> starts;
  starts.push_back({"ball", Eigen::VectorXd::Zero(space.dim())});
  {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(space.dim());
    std::vector<double> hq = pr.h_q();
    for (int s = 0; s < slots; ++s) space.encode(hq, s, x);
    starts.push_back({"h_q", x});
  }
  for (auto& s : seed_starts) starts.push_back(std::move(s));
  if (slots == 1) {
    for (std::size_t k = 0; k < pr.decoupled.size(); ++k) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(space.dim());
      space.encode(pr.decoupled[k], 0, x);
      starts.push_back({"decoupled:" + std::to_string(k), x});
    }
  } else {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(space.dim());
    for (int s = 0; s < slots; ++s) space.encode(pr.decoupled[s], s, x);
    starts.push_back({"decoupled", x});
  }
  if (static_cast<int>(starts.size()) > cfg.starts) starts.resize(cfg.starts);

  NelderMeadOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.tol = cfg.tol;
  std::mt19937_64 rng(detail::mix_seed(cfg.seed, 0x6765));
  std::normal_distribution<double> normal(0.0, 1.0);

  auto run = [&](int index, const Start& start) {
    const double f0 = f(start.x);
    if (!std::isfinite(f0)) return;
    NelderMeadResult r = nelder_mead_minimize(f, start.x, opt);
    est.trace.push_back({index, start.origin, sign * f0, sign * r.value,
                         r.iterations, r.converged});
    if (!r.converged) est.budget_exhausted = true;
    if (r.value < best) {
      best = r.value;
      best_x = r.x;
      best_seed.clear();
      best_origin = start.origin;
    }
  };

  int index = 0;
  for (const auto& s : starts) run(index++, s);
  while (index < cfg.starts) {
    Eigen::VectorXd base = best_x.size() ? best_x : Eigen::VectorXd::Zero(space.dim());
    double sigma = 0.1;
    Eigen::VectorXd x(space.dim());
    bool ok = false;
    for (int attempt = 0; attempt < 30 && !ok; ++attempt, sigma *= 0.5) {
      for (int q = 0; q < x.size(); ++q) x[q] = base[q] + sigma * normal(rng);
      ok = std::isfinite(f(x));
    }
    if (!ok) x = base;
    const std::string origin = "random:" + std::to_string(index);
    run(index++, {origin, x});
  }

  if (!best_seed.empty()) {
    est.witness = best_seed;
  } else {
    for (int s = 0; s < slots; ++s) est.witness.push_back(space.body(best_x, s));
  }
  est.value = pr.value_with_error(logs_of(est.witness));
  est.value.meta.extra["alpha"] = pr.alpha;
  est.value.meta.extra["starts"] = index;
  est.source = best_origin;
  return est;
}

bool better(double a, double b, double p) { return p >= 0 ? a < b : a > b; }

// Replaces `target` by the shared-pool value when that is at least as good.
void adopt(GeoEstimate& target, const GeoEstimate& from, int from_alpha,
           int slots, double p) {
  if (!better(from.value.value, target.value.value, p)) return;
  const double searched = target.value.value;
  target.value.value = from.value.value;
  target.value.err = std::max(target.value.err, from.value.err);
  target.value.meta.extra["searched_value"] = searched;
  if (from.witness.size() == 1 && slots > 1) {
    target.witness.assign(slots, from.witness[0]);
  } else {
    target.witness = from.witness;
  }
  target.source = "shared:" + std::to_string(from_alpha);
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::kEllipsoid:
      return "ellipsoid";
    case Family::kFourier:
      return "fourier-support";
    case Family::kRadialGrid:
      return "radial-grid";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  if (s == "ellipsoid") return Family::kEllipsoid;
  if (s == "fourier-support" || s == "fourier") return Family::kFourier;
  if (s == "radial-grid" || s == "radial") return Family::kRadialGrid;
  throw std::invalid_argument("unknown competitor family: " + s);
}

void SearchConfig::validate() const {
  if (starts < 1) throw std::invalid_argument("starts must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
}

double objective(int alpha, std::span<const SmoothBody> Ks,
                 std::span<const ConvexSupportBody> Ls, double p) {
  Problem pr = main_problem(alpha, Ks, p);
  if (p == 0.0) return pr.closed_form_zero().value;
  if (static_cast<int>(Ls.size()) != pr.slots()) {
    throw std::invalid_argument("competitor count does not match alpha");
  }
  for (const auto& L : Ls) require_same_grid(*pr.grid, *L.grid);
  return pr.value(logs_of(Ls));
}

double objective_i(int alpha, const SmoothBody& K, const SmoothBody& L,
                   std::span<const ConvexSupportBody> Qs, double p, double i) {
  Problem pr = ith_problem(alpha, K, L, p, i);
  if (p == 0.0) return pr.closed_form_zero().value;
  if (static_cast<int>(Qs.size()) != pr.slots()) {
    throw std::invalid_argument("competitor count does not match alpha");
  }
  for (const auto& Q : Qs) require_same_grid(*pr.grid, *Q.grid);
  return pr.value(logs_of(Qs));
}

GeoEstimate estimate_G(int alpha, std::span<const SmoothBody> Ks, double p,
                       const SearchConfig& cfg) {
  return run_search(main_problem(alpha, Ks, p), cfg);
}

GeoEstimate estimate_G_tilde(const SmoothBody& K, double p,
                             const SearchConfig& cfg) {
  return run_search(tilde_problem(K, p), cfg);
}

GeoEstimate estimate_G_i(int alpha, const SmoothBody& K, const SmoothBody& L,
                         double p, double i, const SearchConfig& cfg) {
  return run_search(ith_problem(alpha, K, L, p, i), cfg);
}

std::array<GeoEstimate, 3> estimate_G_all(std::span<const SmoothBody> Ks,
                                          double p, const SearchConfig& cfg) {
  std::array<GeoEstimate, 3> out;
  const int n = Ks.empty() ? 0 : Ks[0].dim();
  PExponent pe(p, n);
  if (!cfg.shared_pool || p == 0.0) {
    for (int a = 1; a <= 3; ++a) out[a - 1] = estimate_G(a, Ks, p, cfg);
    return out;
  }
  out[0] = estimate_G(1, Ks, p, cfg);
  // p >= 0:       G1 >= G2 >= G3 (inf);  -n < p < 0: G1 <= G2 <= G3 (sup).
  // p < -n:       G1 <= G3 <= G2, so alpha = 3 is searched before alpha = 2.
  const std::array<int, 2> order =
      pe.regime() == Regime::kNegLow ? std::array<int, 2>{3, 2}
                                     : std::array<int, 2>{2, 3};
  int prev = 1;
  for (int a : order) {
    SearchConfig c = cfg;
    c.seeds.push_back(out[prev - 1].witness);
    out[a - 1] = estimate_G(a, Ks, p, c);
    adopt(out[a - 1], out[prev - 1], prev, n, p);
    out[a - 1].trace.push_back({-1, "shared-pool:" + std::to_string(prev),
                                out[prev - 1].value.value, out[a - 1].value.value,
                                0, true});
    prev = a;
  }
  return out;
}

GeoEstimate estimate_asp1(std::span<const SmoothBody> Ks, double p,
                          const SearchConfig& cfg) {
  cfg.validate();
  if (Ks.empty()) throw std::invalid_argument("no bodies");
  const int n = Ks[0].dim();
  if (static_cast<int>(Ks.size()) != n) {
    throw std::invalid_argument("body count must equal the dimension");
  }
  PExponent pe(p, n);
  if (pe.regime() != Regime::kNegLow) {
    throw std::invalid_argument("as_p^(1) search requires p < -n");
  }
  const GridPtr grid = Ks[0].grid();
  const std::size_t N = grid->size();
  const auto& w = grid->weights();
  std::vector<double> F(N, 1.0);
  LogFields t0(n);
  for (int b = 0; b < n; ++b) {
    require_same_grid(*grid, *Ks[b].grid());
    std::vector<double> fp = lp_curvature(Ks[b], p);
    t0[b].resize(N);
    for (std::size_t j = 0; j < N; ++j) {
      F[j] *= guarded_pow(fp[j], 1.0 / n);
      t0[b][j] = std::log(fp[j]) / (n + p);
    }
  }
  const double ea = n / (n + p);          // exponent on A (negative)
  const double eb = p / ((n + p) * n);    // exponent on each B_i (positive)
  const double c = -p / n;

  auto log_j = [&](const LogFields& t) {
    double A = 0.0;
    std::vector<double> B(n, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) {
        s += t[b][j];
        B[b] += w[j] * std::exp(n * t[b][j]);
      }
      A += w[j] * F[j] * std::exp(c * s);
    }
    double v = std::log(static_cast<double>(n)) + ea * std::log(A / n);
    for (int b = 0; b < n; ++b) v += eb * std::log(B[b] / n);
    return v;
  };

  GeoEstimate est;
  est.alpha = 0;
  std::vector<std::pair<std::string, LogFields>> starts = {{"decoupled", t0}};
  if (cfg.starts >= 2) starts.push_back({"ball", LogFields(n, std::vector<double>(N, 0.0))});
  for (std::size_t si = 0; si < cfg.star_seeds.size(); ++si) {
    const auto& tuple = cfg.star_seeds[si];
    if (tuple.size() != 1 && static_cast<int>(tuple.size()) != n) {
      throw std::invalid_argument("star seed tuple size must be 1 or n");
    }
    LogFields t(n, std::vector<double>(N));
    for (int b = 0; b < n; ++b) {
      const StarBody& L = tuple[tuple.size() == 1 ? 0 : b];
      require_same_grid(*grid, *L.grid);
      for (std::size_t j = 0; j < N; ++j) t[b][j] = std::log(guarded_pow(L.rho[j], 1.0));
    }
    starts.push_back({"seed:" + std::to_string(si), std::move(t)});
  }
  double best = -kInf;
  LogFields best_t;
  const int sweeps = std::max(1, cfg.max_iters / 8);
  int index = 0;
  for (auto& [origin, t] : starts) {
    const double init = log_j(t);
    double current = init;
    int sweep = 0;
    bool converged = false;
    bool unbounded = false;
    for (; sweep < sweeps && !converged && !unbounded; ++sweep) {
      for (int b = 0; b < n; ++b) {
        double A = 0.0, B = 0.0;
        std::vector<double> rest(N);
        for (std::size_t j = 0; j < N; ++j) {
          double s = 0.0;
          for (int q = 0; q < n; ++q) {
            if (q != b) s += t[q][j];
          }
          rest[j] = w[j] * F[j] * std::exp(c * s) / n;
          A += rest[j] * std::exp(c * t[b][j]);
          B += w[j] * std::exp(n * t[b][j]) / n;
        }
        for (std::size_t j = 0; j < N; ++j) {
          const double a0 = A - rest[j] * std::exp(c * t[b][j]);
          const double b0 = B - w[j] * std::exp(n * t[b][j]) / n;
          const double bj = w[j] / n;
          auto neg_g = [&](double x) {
            return -(ea * std::log(a0 + rest[j] * std::exp(c * x)) +
                     eb * std::log(b0 + bj * std::exp(n * x)));
          };
          const double x0 = t[b][j];
          auto r = boost::math::tools::brent_find_minima(neg_g, x0 - 2.0, x0 + 2.0, 40);
          if (r.second < neg_g(x0)) {
            t[b][j] = r.first;
          }
          A = a0 + rest[j] * std::exp(c * t[b][j]);
          B = b0 + bj * std::exp(n * t[b][j]);
        }
      }
      const double next = log_j(t);
      converged = std::abs(next - current) <= cfg.tol * std::max(1.0, std::abs(next));
      current = std::max(current, next);
      // The supremum is typically +inf for p < -n; stop once that is evident.
      unbounded = current - init > kUnboundedLogGain;
    }
    est.trace.push_back({index++, unbounded ? origin + ":unbounded" : origin,
                         std::exp(init), std::exp(current), sweep, converged});
    if (!converged && !unbounded) est.budget_exhausted = true;
    if (current > best) {
      best = current;
      best_t = t;
      est.source = origin;
    }
  }

  // Final evaluation with error bars at the witness.
  std::vector<double> a(N);
  std::vector<std::vector<double>> bfield(n, std::vector<double>(N));
  for (std::size_t j = 0; j < N; ++j) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) {
      s += best_t[b][j];
      bfield[b][j] = std::exp(n * best_t[b][j]);
    }
    a[j] = F[j] * std::exp(c * s);
  }
  Quadrature qa = integrate_with_error(*grid, a);
  double value = n * std::pow(qa.value / n, ea);
  double rel = std::abs(ea) * qa.err / qa.value;
  for (int b = 0; b < n; ++b) {
    Quadrature qb = integrate_with_error(*grid, bfield[b]);
    value *= std::pow(qb.value / n, eb);
    rel += std::abs(eb) * qb.err / qb.value;
    std::vector<double> rho(N);
    for (std::size_t j = 0; j < N; ++j) rho[j] = std::exp(best_t[b][j]);
    est.star_witness.push_back(make_star_body(grid, std::move(rho)));
  }
  est.value.value = value;
  est.value.err = rel * value;
  est.value.kind = ValueKind::kLowerBound;
  est.value.meta.id = "estimate_asp1";
  est.value.meta.p = p;
  est.value.meta.resolution = grid->resolution();
  return est;
}

std::optional<ConvexSupportBody> vpn_test(std::span<const SmoothBody> Ks,
                                          double p) {
  if (p == 0.0) throw std::invalid_argument("vpn_test needs p != 0");
  Problem pr = main_problem(1, Ks, p);
  std::vector<double> h = pr.h_q();
  for (double v : h) {
    if (!(v > 0) || !std::isfinite(v)) return std::nullopt;
  }
  try {
    return make_support_body(pr.grid, std::move(h));
  } catch (const DegenerateBody&) {
    return std::nullopt;
  }
}

FourierSupport fit_fourier_competitor(std::span<const double> h, int k_max) {
  FourierSupport fs = fit_fourier(h, k_max);
  if (!(fs.c0 > 0)) return FourierSupport{1.0, std::vector<double>(k_max, 0.0),
                                          std::vector<double>(k_max, 0.0)};
  fs.a.resize(k_max, 0.0);
  fs.b.resize(k_max, 0.0);
  for (int k = 0; k < k_max; ++k) {
    fs.a[k] /= fs.c0;
    fs.b[k] /= fs.c0;
  }
  fs.c0 = 1.0;
  std::vector<double> c, s;
  fill_table(512, k_max, c, s);
  if (fourier_feasible(fs, c, s, 512, k_max)) return fs;
  // Largest feasible blend toward the unit ball.
  double lo = 0.0, hi = 1.0;
  FourierSupport trial = fs;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    for (int k = 0; k < k_max; ++k) {
      trial.a[k] = mid * fs.a[k];
      trial.b[k] = mid * fs.b[k];
    }
    (fourier_feasible(trial, c, s, 512, k_max) ? lo : hi) = mid;
  }
  for (int k = 0; k < k_max; ++k) {
    fs.a[k] *= lo;
    fs.b[k] *= lo;
  }
  return fs;
}

Eigen::MatrixXd fit_ellipsoid_competitor(const SphereGrid& grid,
                                         std::span<const double> h) {
  const int n = grid.dim();
  if (h.size() != grid.size()) throw std::invalid_argument("sample count mismatch");
  const int terms = n * (n + 1) / 2;
  Eigen::MatrixXd D(grid.size(), terms);
  Eigen::VectorXd y(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double sw = std::sqrt(grid.weights()[j]);
    const auto u = grid.nodes().col(j);
    int idx = 0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c <= r; ++c) {
        D(j, idx++) = sw * (r == c ? u[r] * u[r] : 2.0 * u[r] * u[c]);
      }
    }
    y[j] = sw * h[j] * h[j];
  }
  Eigen::VectorXd m = D.colPivHouseholderQr().solve(y);
  Eigen::MatrixXd M(n, n);
  int idx = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c <= r; ++c) {
      M(r, c) = M(c, r) = m[idx++];
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd L = llt.matrixL();
  for (int r = 0; r < n; ++r) {
    if (!(L(r, r) > 0) || !std::isfinite(L(r, r))) return Eigen::MatrixXd::Identity(n, n);
  }
  return L;
}

}  // namespace geokit
