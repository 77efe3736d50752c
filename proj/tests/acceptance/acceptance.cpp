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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "geokit/bodies.hpp"
#include "geokit/functionals.hpp"
#include "geokit/geominimal.hpp"
#include "geokit/harness.hpp"

namespace {

using namespace geokit;
using harness::SuiteConfig;
using harness::SuiteReport;
using harness::Verdict;

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 2026;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
  }
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SuiteReport suite(const std::string& rule, int count, std::uint64_t seed = kSeed, int resolution = 128) {
  SuiteConfig cfg;
  cfg.rules = {rule};
  cfg.count = count;
  cfg.seed = seed;
  cfg.resolution = resolution;
  return harness::fuzz_suite(cfg);
}

std::string tally_line(const std::string& rule, const harness::Tallies& t) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "    %-8s verified %d (certified %d, instance %d) inconclusive %d violated %d "
                "report-only %d skipped %d errors %d inconclusive-rate %.3f",
                rule.c_str(), t.verified, t.verified_certified, t.verified_instance, t.inconclusive,
                t.violated, t.report_only, t.skipped, t.errors, t.inconclusive_rate());
  return buf;
}

// 1. Ball anchor.
Outcome ball_anchor() {
  Outcome o;
  const GridPtr g = build_default_grid(2, 128);
  std::vector<SmoothBody> balls{make_ball(g, 1), make_ball(g, 1)};
  const double target = 2 * kPi;
  SearchConfig cfg;
  cfg.seed = kSeed;
  double worst_q = 0, worst_e = 0;
  for (double p : {1.0, 2.0, 0.5, -0.5, -1.0, -3.0}) {
    const double q = rel(mixed_p_affine(balls, p).value, target);
    worst_q = std::max(worst_q, q);
    note(o, q <= 1e-10, fmt("as_p at p=%g off by %.2e", p, q));
    for (int alpha = 1; alpha <= 3; ++alpha) {
      if (alpha == 2 && p < -2) continue;  // identity stated for p > -n
      const double e = rel(estimate_G(alpha, balls, p, cfg).value.value, target);
      worst_e = std::max(worst_e, e);
      note(o, e <= 5e-3, fmt("G^(%g) at p=%g off by %.2e", alpha, p, e));
    }
  }
  if (o.pass) o.detail = fmt("max rel err quadrature %.1e, estimator %.1e", worst_q, worst_e);
  return o;
}

// 2. Ellipsoid closed form.
Outcome ellipsoid_closed_form() {
  Outcome o;
  const GridPtr g = build_default_grid(2, 128);
  const GridPtr fine = build_default_grid(2, 1280);
  std::mt19937_64 rng(kSeed);
  SearchConfig cfg;
  cfg.seed = kSeed;
  double worst_q = 0, worst_o = 0, worst_e = 0;
  for (int k = 0; k < 6; ++k) {
    const Eigen::MatrixXd A = random_linear_matrix(rng, 2, 0.7, false);
    std::vector<SmoothBody> es{make_ellipsoid(g, A), make_ellipsoid(g, A)};
    std::vector<SmoothBody> ef{make_ellipsoid(fine, A), make_ellipsoid(fine, A)};
    for (double p : {1.0, 2.0, 0.5, -0.5, -1.0, -3.0}) {
      const double closed = 2 * kPi * std::pow(std::abs(A.determinant()), (2 - p) / (2 + p));
      const double q = rel(mixed_p_affine(es, p).value, closed);
      const double oracle = rel(mixed_p_affine(ef, p).value, closed);
      worst_q = std::max(worst_q, q);
      worst_o = std::max(worst_o, oracle);
      note(o, q <= 1e-8, fmt("as_p off by %.2e at p=%g", q, p));
      note(o, oracle <= 1e-8, fmt("10x oracle off by %.2e at p=%g", oracle, p));
      if (k < 3) {
        const double e = rel(estimate_G(3, es, p, cfg).value.value, closed);
        worst_e = std::max(worst_e, e);
        note(o, e <= 1e-2, fmt("G^(3) off by %.2e at p=%g", e, p));
      }
    }
  }
  if (o.pass) {
    o.detail = fmt("max rel err quadrature %.1e, 10x oracle %.1e, G^(3) %.1e", worst_q, worst_o, worst_e);
  }
  return o;
}

// Every case verified, nothing else.
void require_all_verified(Outcome& o, const SuiteReport& r, const std::string& rule) {
  const auto& t = r.total;
  note(o, t.verified == r.count,
       rule + ": " + std::to_string(t.verified) + "/" + std::to_string(r.count) + " verified (" +
           std::to_string(t.inconclusive) + " inconclusive, " + std::to_string(t.violated) +
           " violated, " + std::to_string(t.skipped) + " skipped, " + std::to_string(t.errors) +
           " errors)");
}

// 3. Affine covariance: closed form under GL(2), estimator under SL(2).
Outcome affine_covariance() {
  Outcome o;
  const SuiteReport r = suite("AFFINE", 20);
  require_all_verified(o, r, "AFFINE");
  std::printf("%s\n", tally_line("AFFINE", r.total).c_str());
  if (o.pass) o.detail = "20/20 cases verified (closed form 1e-8, estimator 2%)";
  return o;
}

// 4. Structural ordering.
Outcome structural_ordering() {
  Outcome o;
  const int per_p = 50;
  const int count = per_p * static_cast<int>(harness::default_p_list(2).size());
  const SuiteReport r = suite("ORDER", count);
  require_all_verified(o, r, "ORDER");
  int other = 0;
  for (const auto& c : r.cases) other += c.soundness != "structural";
  note(o, other == 0, std::to_string(other) + " cases not tagged structural");
  std::printf("%s\n", tally_line("ORDER", r.total).c_str());
  if (o.pass) o.detail = std::to_string(count) + " cases, 50 per sampled p, all verified";
  return o;
}

// 5. Two-sided suites with equality configurations.
Outcome two_sided_suites() {
  Outcome o;
  int equality_checks = 0;
  double worst_ratio = 0.0;
  for (const std::string rule : {"DUALH", "VPH", "PROP32", "PROP61", "PROP31"}) {
    const SuiteReport r = suite(rule, 500);
    std::printf("%s\n", tally_line(rule, r.total).c_str());
    note(o, r.total.violated == 0, rule + ": " + std::to_string(r.total.violated) + " violated");
    note(o, r.total.errors == 0, rule + ": " + std::to_string(r.total.errors) + " errors");
    for (const auto& c : r.cases) {
      for (const auto& chk : c.checks) {
        if (!chk.equality_case) continue;
        ++equality_checks;
        const double err = chk.lhs.err + chk.rhs.err;
        const double ratio = err > 0 ? std::abs(chk.slack) / err : (chk.slack == 0 ? 0 : INFINITY);
        worst_ratio = std::max(worst_ratio, ratio);
        if (std::abs(chk.slack) > 10 * err) {
          note(o, false, rule + " case " + std::to_string(c.index) + " '" + chk.label +
                             "': |slack| " + fmt("%.2e > 10 err %.2e", std::abs(chk.slack), 10 * err));
        }
      }
    }
  }
  std::printf("    equality checks %d, max |slack|/err %.3f\n", equality_checks, worst_ratio);
  if (o.pass) {
    o.detail = "2500 cases, 0 violated; " + std::to_string(equality_checks) +
               " equality checks within 10 err (max ratio " + fmt("%.2f", worst_ratio) + ")";
  }
  return o;
}

// 6. One-sided theorem suites.
Outcome one_sided_suites() {
  Outcome o;
  double worst_rate = 0;
  for (const std::string rule : {"ISO", "SANTALO", "AF1", "AF2", "COR51", "COR52", "CYCLIC", "MONO",
                                 "ASREL", "ITHCYC", "ITHISO"}) {
    const SuiteReport r = suite(rule, 100);
    std::printf("%s\n", tally_line(rule, r.total).c_str());
    std::fflush(stdout);
    note(o, r.total.violated == 0, rule + ": " + std::to_string(r.total.violated) + " violated");
    note(o, r.total.errors == 0, rule + ": " + std::to_string(r.total.errors) + " errors");
    const double rate = r.total.inconclusive_rate();
    worst_rate = std::max(worst_rate, rate);
    note(o, rate <= 0.2, rule + fmt(": inconclusive rate %.3f", rate));
  }
  if (o.pass) o.detail = "1100 cases, 0 violated, max inconclusive rate " + fmt("%.3f", worst_rate);
  return o;
}

// 7. Curvature-image identity.
Outcome curvature_image() {
  Outcome o;
  const GridPtr g = build_default_grid(2, 128);
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const SmoothBody k = random_smooth_body(g, kSeed + s, 5, 0.05);
    for (double p : {1.0, 2.0, -1.0, -3.0}) {
      const double res = p_curvature_image(k, p).residual;
      worst = std::max(worst, res);
      if (res > 1e-10) note(o, false, fmt("residual %.2e at p=%g", res, p));
    }
  }
  double worst_ball = 0;
  for (double r : {0.5, 1.7, 3.0}) {
    for (double p : {1.0, 2.0, -1.0, -3.0}) {
      const double want = std::pow(r, (2 - p) / p);
      for (double rho : p_curvature_image(make_ball(g, r), p).body.rho) {
        worst_ball = std::max(worst_ball, std::abs(rho - want) / want);
      }
    }
  }
  note(o, worst_ball <= 1e-12, fmt("ball image off by %.2e", worst_ball));
  if (o.pass) o.detail = fmt("max residual %.1e, ball image rel err %.1e", worst, worst_ball);
  return o;
}

// 8. Mixed-volume cross-check and the Minkowski inequality.
Outcome mixed_volume() {
  Outcome o;
  const GridPtr g = build_default_grid(2, 512);
  double worst = 0;
  int minkowski_bad = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    std::vector<SmoothBody> ks{random_smooth_body(g, kSeed + 2 * s, 5, 0.05),
                               random_smooth_body(g, kSeed + 2 * s + 1, 5, 0.05)};
    const FunctionalValue v2 = classical_mixed_volume_2d(ks[0], ks[1]);
    const FunctionalValue vn = classical_mixed_volume_nd(ks);
    worst = std::max(worst, std::abs(v2.value - vn.value));
    harness::Check c;
    c.label = "V(K1,K2)^2 >= |K1||K2|";
    c.relation = harness::Relation::kGe;
    c.lhs = {{harness::Product{"V^2", 1.0, {harness::Term{v2, 2.0}}}}};
    const FunctionalValue a = volume(ks[0]), b = volume(ks[1]);
    c.rhs = {{harness::Product{"|K1||K2|", 1.0, {harness::Term{a}, harness::Term{b}}}}};
    const harness::CheckResult r = harness::judge(c);
    if (r.verdict != Verdict::kVerified) ++minkowski_bad;
  }
  note(o, worst <= 1e-8, fmt("2d vs nd differ by %.2e", worst));
  note(o, minkowski_bad == 0, fmt("Minkowski not verified in %g pairs", minkowski_bad));
  if (o.pass) o.detail = fmt("100 pairs at resolution 512, max |diff| %.1e, Minkowski verified", worst);
  return o;
}

// 9. Determinism.
Outcome determinism() {
  Outcome o;
  SuiteConfig cfg;
  cfg.rules = {"DUALH", "ORDER", "CYCLIC", "SANTALO"};
  cfg.count = 6;
  cfg.seed = kSeed;
  const std::string a = harness::to_json(harness::fuzz_suite(cfg)).dump(1);
  const std::string a_csv = harness::to_csv(harness::fuzz_suite(cfg));
  cfg.threads = 1;
  const std::string b = harness::to_json(harness::fuzz_suite(cfg)).dump(1);
  const std::string b_csv = harness::to_csv(harness::fuzz_suite(cfg));
  note(o, a == b, "JSON reports differ");
  note(o, a_csv == b_csv, "CSV reports differ");
  if (o.pass) o.detail = "repeated runs byte-identical (JSON " + std::to_string(a.size()) + " bytes, CSV)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ball anchor", ball_anchor},
      {"ellipsoid closed form", ellipsoid_closed_form},
      {"affine covariance", affine_covariance},
      {"structural ordering", structural_ordering},
      {"two-sided Hoelder suites", two_sided_suites},
      {"one-sided theorem suites", one_sided_suites},
      {"curvature-image identity", curvature_image},
      {"mixed-volume cross-check", mixed_volume},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
