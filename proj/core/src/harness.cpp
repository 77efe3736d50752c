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

#include "geokit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "geokit/serialize.hpp"
#include "mix.hpp"

namespace geokit::harness {
namespace {

using nlohmann::json;

constexpr double kRounding = 1e-14;

int severity(Verdict v) {
  switch (v) {
    case Verdict::kVerified: return 0;
    case Verdict::kReportOnly: return 0;
    case Verdict::kSkipped: return 0;
    case Verdict::kInconclusive: return 1;
    case Verdict::kViolated: return 2;
    case Verdict::kError: return 3;
  }
  return 3;
}

Bound flip(Bound b) {
  if (b == Bound::kUpper) return Bound::kLower;
  if (b == Bound::kLower) return Bound::kUpper;
  return b;
}

Bound merge(Bound a, Bound b) {
  if (a == Bound::kExact) return b;
  if (b == Bound::kExact || a == b) return a;
  return Bound::kMixed;
}

bool exact_or(Bound b, Bound allowed) { return b == Bound::kExact || b == allowed; }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct Directed {
  double slack;
  double tol;
  Verdict verdict;
  bool certified;
};

// lo <= hi.
Directed judge_le(const SideValue& lo, const SideValue& hi, const Check& c) {
  const double m = std::max(std::abs(lo.value), std::abs(hi.value));
  Directed d;
  d.slack = hi.value - lo.value;
  d.tol = c.err_factor * (lo.err + hi.err) + c.rel_tol * m + kRounding * m;
  d.certified = exact_or(lo.bound, Bound::kUpper) && exact_or(hi.bound, Bound::kLower);
  if (d.slack >= -d.tol) {
    d.verdict = Verdict::kVerified;
  } else {
    const bool certifies_failure =
        exact_or(lo.bound, Bound::kLower) && exact_or(hi.bound, Bound::kUpper);
    d.verdict = certifies_failure ? Verdict::kViolated : Verdict::kInconclusive;
  }
  return d;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string opt_fmt(const std::optional<double>& x) { return x ? fmt(*x) : ""; }

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json side_json(const Side& side, const SideValue& v) {
  json alts = json::array();
  for (const auto& prod : side.alternatives) {
    json terms = json::array();
    for (const auto& t : prod.terms) {
      terms.push_back({{"exponent", t.exponent}, {"value", value_to_json(t.value)}});
    }
    alts.push_back({{"label", prod.label}, {"coef", prod.coef}, {"terms", std::move(terms)}});
  }
  return {{"value", v.value},
          {"err", v.err},
          {"bound", to_string(v.bound)},
          {"argmin", v.argmin},
          {"alternatives", std::move(alts)}};
}

VerdictReport run_once(const Rule& rule, const CaseContext& ctx) {
  VerdictReport r;
  r.rule = rule.id;
  r.index = ctx.index;
  r.seed = ctx.seed;
  r.resolution = ctx.resolution;
  r.p = ctx.p;
  r.i = ctx.i;
  CaseEval eval;
  try {
    eval = rule.run(ctx);
    r.inputs = eval.inputs;
    r.reports = eval.reports;
    for (const auto& c : eval.checks) r.checks.push_back(judge(c));
  } catch (const SkipCase& e) {
    r.verdict = Verdict::kSkipped;
    r.message = e.what();
    return r;
  } catch (const std::exception& e) {
    r.verdict = Verdict::kError;
    r.message = e.what();
    return r;
  }
  if (r.checks.empty()) {
    r.verdict = r.reports.empty() ? Verdict::kSkipped : Verdict::kReportOnly;
    if (r.reports.empty()) r.message = "no checks produced";
    return r;
  }
  const CheckResult* decisive = nullptr;
  double decisive_rel = 0.0;
  bool all_certified = true;
  bool all_structural = true;
  for (const auto& c : r.checks) {
    const double m = std::max({std::abs(c.lhs.value), std::abs(c.rhs.value),
                               std::numeric_limits<double>::min()});
    const double rel = c.slack / m;
    if (c.verdict == Verdict::kVerified && c.soundness == "instance") all_certified = false;
    if (c.soundness != "structural") all_structural = false;
    if (!decisive || severity(c.verdict) > severity(decisive->verdict) ||
        (severity(c.verdict) == severity(decisive->verdict) && rel < decisive_rel)) {
      decisive = &c;
      decisive_rel = rel;
    }
  }
  r.verdict = decisive->verdict;
  r.slack = decisive->slack;
  r.tol = decisive->tol;
  r.relative_slack = decisive_rel;
  if (r.verdict == Verdict::kVerified) {
    r.soundness = all_structural ? "structural" : (all_certified ? "certified" : "instance");
  }
  return r;
}

}  // namespace

std::string to_string(Relation r) {
  switch (r) {
    case Relation::kLe: return "<=";
    case Relation::kGe: return ">=";
    case Relation::kEq: return "=";
  }
  return "?";
}

std::string to_string(Verifiability v) {
  switch (v) {
    case Verifiability::kTwoSided: return "two-sided";
    case Verifiability::kOneSided: return "one-sided";
    case Verifiability::kStructural: return "structural";
    case Verifiability::kReportOnly: return "report-only";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kVerified: return "verified";
    case Verdict::kInconclusive: return "inconclusive";
    case Verdict::kViolated: return "violated";
    case Verdict::kReportOnly: return "report-only";
    case Verdict::kSkipped: return "skipped";
    case Verdict::kError: return "error";
  }
  return "?";
}

std::string to_string(Bound b) {
  switch (b) {
    case Bound::kExact: return "exact";
    case Bound::kUpper: return "upper";
    case Bound::kLower: return "lower";
    case Bound::kMixed: return "mixed";
  }
  return "?";
}

Bound bound_of(ValueKind kind) {
  switch (kind) {
    case ValueKind::kClosedForm:
    case ValueKind::kQuadrature: return Bound::kExact;
    case ValueKind::kUpperBound: return Bound::kUpper;
    case ValueKind::kLowerBound: return Bound::kLower;
  }
  return Bound::kMixed;
}

SideValue evaluate(const Side& side) {
  if (side.alternatives.empty()) throw std::invalid_argument("empty side");
  SideValue out;
  bool first = true;
  Bound bound = Bound::kExact;
  for (std::size_t k = 0; k < side.alternatives.size(); ++k) {
    const Product& prod = side.alternatives[k];
    if (!(prod.coef > 0.0)) throw std::invalid_argument("product coefficient must be positive");
    double log_value = std::log(prod.coef);
    double rel_err = 0.0;
    for (const auto& t : prod.terms) {
      if (t.exponent == 0.0) continue;
      if (!(t.value.value > 0.0) || !std::isfinite(t.value.value)) {
        throw std::domain_error("term " + t.value.meta.id + " is not positive and finite");
      }
      log_value += t.exponent * std::log(t.value.value);
      rel_err += std::abs(t.exponent) * t.value.err / t.value.value;
      Bound b = bound_of(t.value.kind);
      bound = merge(bound, t.exponent < 0.0 ? flip(b) : b);
    }
    const double value = std::exp(log_value);
    if (!std::isfinite(value)) throw std::domain_error("product " + prod.label + " overflows");
    if (first || value < out.value) {
      out.value = value;
      out.err = rel_err * value;
      out.argmin = k;
      first = false;
    }
  }
  out.bound = bound;
  return out;
}

CheckResult judge(const Check& check) {
  CheckResult r;
  r.label = check.label;
  r.relation = check.relation;
  r.lhs_side = check.lhs;
  r.rhs_side = check.rhs;
  r.lhs = evaluate(check.lhs);
  r.rhs = evaluate(check.rhs);
  r.equality_case = check.equality_case;
  bool certified = false;
  switch (check.relation) {
    case Relation::kLe: {
      Directed d = judge_le(r.lhs, r.rhs, check);
      r.slack = d.slack;
      r.tol = d.tol;
      r.verdict = d.verdict;
      certified = d.certified;
      break;
    }
    case Relation::kGe: {
      Directed d = judge_le(r.rhs, r.lhs, check);
      r.slack = d.slack;
      r.tol = d.tol;
      r.verdict = d.verdict;
      certified = d.certified;
      break;
    }
    case Relation::kEq: {
      Directed a = judge_le(r.lhs, r.rhs, check);
      Directed b = judge_le(r.rhs, r.lhs, check);
      r.slack = -std::abs(r.rhs.value - r.lhs.value);
      r.tol = a.tol;
      r.verdict = severity(a.verdict) >= severity(b.verdict) ? a.verdict : b.verdict;
      certified = a.certified && b.certified;
      break;
    }
  }
  const bool exact = r.lhs.bound == Bound::kExact && r.rhs.bound == Bound::kExact;
  if (check.structural) {
    r.verifiability = Verifiability::kStructural;
  } else {
    r.verifiability = exact ? Verifiability::kTwoSided : Verifiability::kOneSided;
  }
  if (r.verdict == Verdict::kVerified) {
    r.soundness = check.structural ? "structural" : (certified ? "certified" : "instance");
  }
  return r;
}

const Rule& find_rule(const std::string& id) {
  for (const auto& rule : catalogue()) {
    if (rule.id == id) return rule;
  }
  throw UnknownRule("unknown rule id: " + id);
}

VerdictReport check(const Rule& rule, const CaseContext& ctx, bool escalate) {
  VerdictReport r = run_once(rule, ctx);
  if (r.verdict != Verdict::kViolated || !escalate) return r;
  CaseContext fine = ctx;
  fine.resolution = ctx.resolution * 2;
  VerdictReport again = run_once(rule, fine);
  r.escalated = true;
  if (again.verdict == Verdict::kViolated) {
    r.message = "violation reproduced at resolution " + std::to_string(fine.resolution);
  } else {
    r.verdict = Verdict::kInconclusive;
    r.message = "violation not reproduced at resolution " + std::to_string(fine.resolution) +
                " (" + to_string(again.verdict) + ")";
  }
  return r;
}

std::vector<double> default_p_list(int n) {
  const double d = n;
  return {1.0, 2.0, 5.0, 0.5, -0.5, -1.0, -d - 1.0, -2.0 * d};
}

std::vector<double> default_i_list(int n) {
  const double d = n;
  return {-1.0, 0.0, 0.5 * d, d, d + 1.0};
}

void Tallies::add(const VerdictReport& r, int position) {
  switch (r.verdict) {
    case Verdict::kVerified:
      ++verified;
      if (r.soundness == "instance") {
        ++verified_instance;
      } else {
        ++verified_certified;
      }
      break;
    case Verdict::kInconclusive: ++inconclusive; break;
    case Verdict::kViolated: ++violated; break;
    case Verdict::kReportOnly: ++report_only; break;
    case Verdict::kSkipped: ++skipped; break;
    case Verdict::kError: ++errors; break;
  }
  const bool judged_case = r.verdict == Verdict::kVerified ||
                           r.verdict == Verdict::kInconclusive ||
                           r.verdict == Verdict::kViolated;
  if (judged_case && (!min_slack_case || r.relative_slack < min_slack)) {
    min_slack_case = position;
    min_slack = r.relative_slack;
  }
}

int thread_count(int requested) {
  unsigned hw = std::thread::hardware_concurrency();
  int n = requested > 0 ? requested : static_cast<int>(hw == 0 ? 1 : hw);
  if (const char* env = std::getenv("GEOKIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

SuiteReport fuzz_suite(const SuiteConfig& cfg) {
  if (cfg.dim != 2) throw std::invalid_argument("random bodies are generated in the plane only");
  if (cfg.count < 0) throw std::invalid_argument("count must be nonnegative");
  if (cfg.resolution < 64 || (cfg.resolution & (cfg.resolution - 1)) != 0) {
    throw std::invalid_argument("planar resolution must be a power of two >= 64");
  }
  cfg.search.validate();
  const std::vector<double> p_list = cfg.p_list.empty() ? default_p_list(cfg.dim) : cfg.p_list;
  const std::vector<double> i_list = cfg.i_list.empty() ? default_i_list(cfg.dim) : cfg.i_list;
  for (double p : p_list) PExponent(p, cfg.dim);

  struct Job {
    const Rule* rule;
    CaseContext ctx;
  };
  std::vector<Job> jobs;
  SuiteReport report;
  report.seed = cfg.seed;
  report.resolution = cfg.resolution;
  report.count = cfg.count;
  for (const auto& id : cfg.rules) {
    const Rule& rule = find_rule(id);
    if (!report.suite.empty()) report.suite += "+";
    report.suite += rule.id;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<double, double>> combos;
    if (!rule.uses_p) {
      combos.emplace_back(nan, nan);
    } else {
      for (double p : p_list) {
        if (!rule.uses_i) {
          if (!rule.admits || rule.admits(p, nan, cfg.dim)) combos.emplace_back(p, nan);
          continue;
        }
        for (double i : i_list) {
          if (!rule.admits || rule.admits(p, i, cfg.dim)) combos.emplace_back(p, i);
        }
      }
    }
    if (combos.empty()) continue;
    const std::uint64_t stream = fnv1a(rule.id);
    for (int k = 0; k < cfg.count; ++k) {
      Job job{&rule, {}};
      CaseContext& ctx = job.ctx;
      ctx.index = k;
      ctx.seed = detail::mix_seed(cfg.seed, stream + static_cast<std::uint64_t>(k));
      ctx.dim = cfg.dim;
      ctx.resolution = cfg.resolution;
      const auto& [p, i] = combos[k % combos.size()];
      if (!std::isnan(p)) ctx.p = p;
      if (!std::isnan(i)) ctx.i = i;
      ctx.p_list = p_list;
      ctx.i_list = i_list;
      ctx.search = cfg.search;
      ctx.search.seed = detail::mix_seed(ctx.seed, 0x5eed);
      jobs.push_back(std::move(job));
    }
  }

  report.cases.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      report.cases[j] = check(*jobs[j].rule, jobs[j].ctx, cfg.escalate);
    }
  };
  const int threads = std::min<int>(thread_count(cfg.threads),
                                    static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t j = 0; j < report.cases.size(); ++j) {
    const auto& c = report.cases[j];
    report.per_rule[c.rule].add(c, static_cast<int>(j));
    report.total.add(c, static_cast<int>(j));
  }
  return report;
}

json to_json(const CheckResult& c) {
  return {{"label", c.label},
          {"relation", to_string(c.relation)},
          {"lhs", side_json(c.lhs_side, c.lhs)},
          {"rhs", side_json(c.rhs_side, c.rhs)},
          {"slack", c.slack},
          {"tol", c.tol},
          {"verdict", to_string(c.verdict)},
          {"verifiability", to_string(c.verifiability)},
          {"soundness", c.soundness},
          {"equality_case", c.equality_case}};
}

json to_json(const VerdictReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  json reports = json::array();
  for (const auto& item : r.reports) {
    reports.push_back({{"label", item.label},
                       {"value", value_to_json(item.value)},
                       {"ratio", item.ratio}});
  }
  return {{"rule", r.rule},
          {"index", r.index},
          {"seed", r.seed},
          {"resolution", r.resolution},
          {"p", opt_json(r.p)},
          {"i", opt_json(r.i)},
          {"inputs", r.inputs},
          {"checks", std::move(checks)},
          {"reports", std::move(reports)},
          {"verdict", to_string(r.verdict)},
          {"slack", r.slack},
          {"relative_slack", r.relative_slack},
          {"tol", r.tol},
          {"soundness", r.soundness},
          {"escalated", r.escalated},
          {"message", r.message}};
}

json to_json(const Tallies& t) {
  json j = {{"verified", t.verified},
            {"verified_certified", t.verified_certified},
            {"verified_instance", t.verified_instance},
            {"inconclusive", t.inconclusive},
            {"violated", t.violated},
            {"report_only", t.report_only},
            {"skipped", t.skipped},
            {"errors", t.errors},
            {"inconclusive_rate", t.inconclusive_rate()}};
  j["min_slack_case"] = t.min_slack_case ? json(*t.min_slack_case) : json(nullptr);
  j["min_relative_slack"] = t.min_slack_case ? json(t.min_slack) : json(nullptr);
  return j;
}

json to_json(const SuiteReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) cases.push_back(to_json(c));
  json per_rule = json::object();
  for (const auto& [id, t] : r.per_rule) per_rule[id] = to_json(t);
  json tallies = to_json(r.total);
  tallies["per_rule"] = std::move(per_rule);
  return {{"schema", 1},
          {"suite", r.suite},
          {"seed", r.seed},
          {"resolution", r.resolution},
          {"count", r.count},
          {"cases", std::move(cases)},
          {"tallies", std::move(tallies)}};
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "rule",  "index",    "seed",     "resolution", "p",         "i",
      "check", "relation", "lhs",      "lhs_err",    "lhs_bound", "rhs",
      "rhs_err", "rhs_bound", "slack", "tol",        "verdict",   "soundness",
      "case_verdict"};
  return cols;
}

std::string to_csv(const SuiteReport& r) {
  std::ostringstream out;
  const auto& cols = csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << "\n";
  for (const auto& c : r.cases) {
    const std::string head = c.rule + "," + std::to_string(c.index) + "," +
                             std::to_string(c.seed) + "," + std::to_string(c.resolution) +
                             "," + opt_fmt(c.p) + "," + opt_fmt(c.i) + ",";
    if (c.checks.empty()) {
      out << head << ",,,,,,,,,,,," << to_string(c.verdict) << "\n";
      continue;
    }
    for (const auto& k : c.checks) {
      out << head << '"' << k.label << '"' << "," << to_string(k.relation) << ","
          << fmt(k.lhs.value) << "," << fmt(k.lhs.err) << "," << to_string(k.lhs.bound) << ","
          << fmt(k.rhs.value) << "," << fmt(k.rhs.err) << "," << to_string(k.rhs.bound) << ","
          << fmt(k.slack) << "," << fmt(k.tol) << "," << to_string(k.verdict) << ","
          << k.soundness << "," << to_string(c.verdict) << "\n";
    }
  }
  return out.str();
}

}  // namespace geokit::harness
