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

// Rule catalogue, verdict logic and fuzzed suites.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geokit/functionals.hpp"
#include "geokit/geominimal.hpp"

namespace geokit::harness {

enum class Relation { kLe, kGe, kEq };
enum class Verifiability { kTwoSided, kOneSided, kStructural, kReportOnly };
enum class Verdict {
  kVerified,
  kInconclusive,
  kViolated,
  kReportOnly,
  kSkipped,
  kError
};
// Direction of an evaluated side relative to its true value.
enum class Bound { kExact, kUpper, kLower, kMixed };

std::string to_string(Relation r);
std::string to_string(Verifiability v);
std::string to_string(Verdict v);
std::string to_string(Bound b);

class UnknownRule : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown by a rule body when the generated input cannot be used.
class SkipCase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  FunctionalValue value;
  double exponent = 1.0;
};

// coef * prod(value^exponent).
struct Product {
  std::string label;
  double coef = 1.0;
  std::vector<Term> terms;
};

// Minimum over the alternatives.
struct Side {
  std::vector<Product> alternatives;
};

struct SideValue {
  double value = 0.0;
  double err = 0.0;
  Bound bound = Bound::kExact;
  std::size_t argmin = 0;
};

Bound bound_of(ValueKind kind);
SideValue evaluate(const Side& side);

struct Check {
  std::string label;
  Relation relation = Relation::kLe;
  Side lhs;
  Side rhs;
  // Relative tolerance added to the propagated error bars.
  double rel_tol = 0.0;
  // Multiplier on the propagated error bars.
  double err_factor = 1.0;
  // Holds by construction of the estimators.
  bool structural = false;
  // Input is an equality configuration.
  bool equality_case = false;
};

struct CheckResult {
  std::string label;
  Relation relation = Relation::kLe;
  Side lhs_side;
  Side rhs_side;
  SideValue lhs;
  SideValue rhs;
  double slack = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::kVerified;
  Verifiability verifiability = Verifiability::kTwoSided;
  // "certified" when every side sits on the sound direction, else "instance".
  std::string soundness;
  bool equality_case = false;
};

CheckResult judge(const Check& check);

struct ReportItem {
  std::string label;
  FunctionalValue value;
  // value / reference.
  double ratio = 0.0;
};

struct CaseEval {
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<ReportItem> reports;
};

struct CaseContext {
  int index = 0;
  std::uint64_t seed = 0;
  int dim = 2;
  int resolution = 128;
  std::optional<double> p;
  std::optional<double> i;
  std::vector<double> p_list;
  std::vector<double> i_list;
  SearchConfig search;
};

struct Rule {
  std::string id;
  std::string summary;
  Verifiability verifiability = Verifiability::kTwoSided;
  bool uses_p = false;
  bool uses_i = false;
  // Admissible (p, i) for the case grid; i is NaN when unused.
  std::function<bool(double p, double i, int n)> admits;
  std::function<CaseEval(const CaseContext&)> run;
};

const std::vector<Rule>& catalogue();
// Throws UnknownRule.
const Rule& find_rule(const std::string& id);

struct VerdictReport {
  std::string rule;
  int index = 0;
  std::uint64_t seed = 0;
  int resolution = 0;
  std::optional<double> p;
  std::optional<double> i;
  nlohmann::json inputs;
  std::vector<CheckResult> checks;
  std::vector<ReportItem> reports;
  Verdict verdict = Verdict::kVerified;
  // Slack and tolerance of the deciding check.
  double slack = 0.0;
  double tol = 0.0;
  // slack over the larger side magnitude.
  double relative_slack = 0.0;
  std::string soundness;
  // A violated verdict was re-checked at doubled resolution.
  bool escalated = false;
  std::string message;
};

// Runs one case, escalating a violation to doubled resolution before it is
// final. Exceptions are recorded in the report.
VerdictReport check(const Rule& rule, const CaseContext& ctx,
                    bool escalate = true);

std::vector<double> default_p_list(int n);
std::vector<double> default_i_list(int n);

struct SuiteConfig {
  std::vector<std::string> rules;
  int count = 100;
  std::uint64_t seed = 0;
  int dim = 2;
  std::vector<double> p_list;  // empty: default_p_list
  std::vector<double> i_list;  // empty: default_i_list
  int resolution = 128;
  SearchConfig search;
  // 0: GEOKIT_THREADS or hardware concurrency.
  int threads = 0;
  bool escalate = true;
};

struct Tallies {
  int verified = 0;
  int verified_certified = 0;
  int verified_instance = 0;
  int inconclusive = 0;
  int violated = 0;
  int report_only = 0;
  int skipped = 0;
  int errors = 0;
  std::optional<int> min_slack_case;
  double min_slack = 0.0;

  int judged() const { return verified + inconclusive + violated; }
  double inconclusive_rate() const {
    return judged() > 0 ? static_cast<double>(inconclusive) / judged() : 0.0;
  }
  void add(const VerdictReport& r, int position);
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int resolution = 0;
  int count = 0;
  std::vector<VerdictReport> cases;
  std::map<std::string, Tallies> per_rule;
  Tallies total;
};

SuiteReport fuzz_suite(const SuiteConfig& cfg);

int thread_count(int requested);

nlohmann::json to_json(const CheckResult& c);
nlohmann::json to_json(const VerdictReport& r);
nlohmann::json to_json(const Tallies& t);
nlohmann::json to_json(const SuiteReport& r);
// One row per check; columns listed by csv_columns().
std::string to_csv(const SuiteReport& r);
const std::vector<std::string>& csv_columns();

}  // namespace geokit::harness
