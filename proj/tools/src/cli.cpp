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

#include "geokit_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "geokit/bodies.hpp"
#include "geokit/functionals.hpp"
#include "geokit/geominimal.hpp"
#include "geokit/harness.hpp"
#include "geokit/serialize.hpp"
#include "geokit/sphere.hpp"

namespace geokit::cli {
namespace {

using nlohmann::json;

// Bad arguments, arity or class mismatches: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  int dim = 2;
  int resolution = 128;
  std::uint64_t seed = 1;
  std::string p;
  std::string i;
  int alpha = 0;
  int count = 100;
  std::string family = "fourier";
  int starts = 8;
  std::string out;
  std::string format = "json";
  // body make
  double r = 1.0;
  std::string matrix;
  std::string coeffs;
  bool list_reports = false;
  std::vector<std::string> positional;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<double> number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(to_double(part));
  return out;
}

double single_number(const std::string& s, const char* name) {
  const std::vector<double> v = number_list(s);
  if (v.size() != 1) throw UsageError(std::string("--") + name + " takes one value here");
  return v.front();
}

Eigen::MatrixXd parse_matrix(const std::string& s, int dim) {
  const std::vector<double> v = number_list(s);
  if (static_cast<int>(v.size()) != dim * dim) {
    throw UsageError("matrix needs " + std::to_string(dim * dim) + " entries");
  }
  Eigen::MatrixXd A(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) A(r, c) = v[r * dim + c];
  return A;
}

// "c0=1,a2=0.1,b3=-0.02"
FourierSupport parse_fourier(const std::string& s) {
  FourierSupport f;
  for (const auto& part : split(s, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      throw UsageError("bad Fourier coefficient '" + part + "'");
    }
    const std::string key = part.substr(0, eq);
    const double value = to_double(part.substr(eq + 1));
    if (key == "c0") {
      f.c0 = value;
      continue;
    }
    if (key.size() < 2 || (key[0] != 'a' && key[0] != 'b')) {
      throw UsageError("bad Fourier coefficient '" + part + "'");
    }
    const int k = static_cast<int>(to_double(key.substr(1)));
    if (k < 1) throw UsageError("Fourier modes start at 1");
    auto& vec = key[0] == 'a' ? f.a : f.b;
    if (static_cast<int>(vec.size()) < k) vec.resize(k, 0.0);
    vec[k - 1] = value;
  }
  return f;
}

GridPtr grid_for(const Options& o) { return build_default_grid(o.dim, o.resolution); }

SmoothBody make_body(const std::string& kind, const std::string& arg, const Options& o) {
  if (kind == "ball") return make_ball(grid_for(o), arg.empty() ? o.r : to_double(arg));
  if (kind == "ellipsoid") return make_ellipsoid(grid_for(o), parse_matrix(arg, o.dim));
  if (kind == "fourier") {
    if (o.dim != 2) throw UsageError("Fourier bodies are planar");
    return make_fourier_body(grid_for(o), parse_fourier(arg));
  }
  if (kind == "random") {
    if (o.dim != 2) throw UsageError("random bodies are planar");
    const std::uint64_t seed = arg.empty() ? o.seed : static_cast<std::uint64_t>(to_double(arg));
    return random_smooth_body(grid_for(o), seed, 5, 0.05);
  }
  throw UsageError("unknown body kind '" + kind + "'");
}

// A body reference is a JSON file or "kind:args" (ball:1, ellipsoid:2,0,0,1,
// fourier:a2=0.1, random:7).
SmoothBody load_body(const std::string& ref, const Options& o) {
  std::ifstream in(ref);
  if (in) {
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw SchemaError(ref + ": " + e.what());
    }
    const bool sampled = j.value("kind", "") == "sampled";
    return body_from_json(j, sampled ? 0 : o.resolution);
  }
  const auto colon = ref.find(':');
  if (colon == std::string::npos) throw UsageError("no such body file '" + ref + "'");
  return make_body(ref.substr(0, colon), ref.substr(colon + 1), o);
}

std::vector<SmoothBody> load_bodies(const Options& o, std::size_t first) {
  std::vector<SmoothBody> bodies;
  for (std::size_t k = first; k < o.positional.size(); ++k) {
    bodies.push_back(load_body(o.positional[k], o));
  }
  for (std::size_t k = 1; k < bodies.size(); ++k) {
    if (!bodies[k].grid()->same_as(*bodies[0].grid())) {
      throw UsageError("bodies must share one grid (check --resolution)");
    }
  }
  return bodies;
}

SearchConfig search_config(const Options& o) {
  SearchConfig cfg;
  cfg.family = family_from_string(o.family);
  cfg.starts = o.starts;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

void emit(std::ostream& out, const json& summary) { out << summary.dump() << '\n'; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

// ---------------------------------------------------------------------------

int cmd_body_make(const Options& o, std::ostream& out) {
  if (o.positional.size() < 3) throw UsageError("usage: body make <ball|ellipsoid|fourier|random>");
  const std::string& kind = o.positional[2];
  std::string arg;
  if (kind == "ellipsoid") arg = o.matrix;
  if (kind == "fourier") arg = o.coeffs;
  if (kind == "ellipsoid" && arg.empty()) throw UsageError("ellipsoid needs --A");
  const SmoothBody body = make_body(kind, arg, o);
  const json j = body_to_json(body);
  if (!o.out.empty()) {
    write_file(o.out, j.dump() + "\n");
    emit(out, {{"command", "body make"}, {"kind", j["kind"]}, {"out", o.out}});
  } else {
    emit(out, j);
  }
  return kOk;
}

json range(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {{"min", *lo}, {"max", *hi}};
}

int cmd_body_show(const Options& o, std::ostream& out) {
  if (o.positional.size() != 3) throw UsageError("usage: body show <body>");
  const SmoothBody body = load_body(o.positional[2], o);
  const json record = body_to_json(body);
  const int n = body.dim();
  const StarBody rho = radial_function(body.support);
  const FunctionalValue vol = volume(body);
  const FunctionalValue pol = polar_volume(body.support);
  const Eigen::VectorXd c = centroid(body);
  const auto [hmin, hmax] = std::minmax_element(body.h().begin(), body.h().end());
  const bool positive_f = std::all_of(body.f.begin(), body.f.end(), [](double f) { return f > 0.0; });
  const double p = o.p.empty() ? 1.0 : single_number(o.p, "p");
  std::vector<SmoothBody> copies(n, body);
  const bool vpn = vpn_test(copies, p).has_value();
  const bool centered = c.norm() <= 1e-8 * *hmax;
  out << "kind        " << record["kind"].get<std::string>() << "  dim " << n << "  nodes "
      << body.h().size() << "\n";
  out << "h           [" << *hmin << ", " << *hmax << "]\n";
  out << "|K|         " << vol.value << " +- " << vol.err << "\n";
  out << "|K°|        " << pol.value << " +- " << pol.err << "\n";
  out << "F_0^+       " << (positive_f ? "yes" : "no") << "   centered " << (centered ? "yes" : "no")
      << "   V_p candidate (p=" << p << ") " << (vpn ? "yes" : "no") << "\n";
  json cj = json::array();
  for (int k = 0; k < c.size(); ++k) cj.push_back(c[k]);
  emit(out, {{"command", "body show"},
             {"kind", record["kind"]},
             {"dim", n},
             {"h", range(body.h())},
             {"rho", range(rho.rho)},
             {"f", range(body.f)},
             {"volume", value_to_json(vol)},
             {"polar_volume", value_to_json(pol)},
             {"centroid", cj},
             {"in_F0_plus", positive_f},
             {"centered", centered},
             {"vpn_candidate", vpn},
             {"vpn_p", p}});
  return kOk;
}

void require_count(const std::vector<SmoothBody>& ks, std::size_t want, const std::string& id) {
  if (ks.size() != want) {
    throw UsageError(id + " takes " + std::to_string(want) + " bodies, got " +
                     std::to_string(ks.size()));
  }
}

// n bodies, or one body repeated n times.
std::vector<SmoothBody> tuple(std::vector<SmoothBody> ks, int n, const std::string& id) {
  if (ks.size() == 1) return std::vector<SmoothBody>(n, ks.front());
  require_count(ks, n, id);
  return ks;
}

std::vector<StarBody> radial_all(const std::vector<SmoothBody>& ks) {
  std::vector<StarBody> out;
  for (const auto& k : ks) out.push_back(radial_function(k.support));
  return out;
}

int alpha_of(const Options& o) {
  if (o.alpha < 1 || o.alpha > 3) throw UsageError("--alpha must be 1, 2 or 3");
  return o.alpha;
}

const std::vector<std::string>& compute_ids() {
  static const std::vector<std::string> ids = {
      "volume", "polar_volume", "volume_radial", "dual_mixed_volume", "dual_mixed_volume_i",
      "p_mixed_volume", "p_mixed_volume_multi", "mixed_p_affine", "asp_i",
      "p_curvature_image", "classical_mixed_volume_2d", "classical_mixed_volume_nd",
      "p_surface_area", "estimate_G", "estimate_G_tilde", "estimate_G_i", "estimate_asp1",
      "vpn_test"};
  return ids;
}

int cmd_compute(const Options& o, std::ostream& out) {
  if (o.positional.size() < 2) throw UsageError("usage: compute <id> <body>...");
  const std::string& id = o.positional[1];
  const std::vector<SmoothBody> ks = load_bodies(o, 2);
  if (ks.empty()) throw UsageError(id + " needs at least one body");
  const int n = ks.front().dim();
  auto p = [&] {
    if (o.p.empty()) throw UsageError(id + " needs --p");
    const double v = single_number(o.p, "p");
    PExponent check(v, n);
    return v;
  };
  auto i = [&] {
    if (o.i.empty()) throw UsageError(id + " needs --i");
    return single_number(o.i, "i");
  };
  auto estimate_out = [&](const GeoEstimate& e) {
    json j = value_to_json(e.value);
    j["estimate"] = estimate_to_json(e);
    j["budget_exhausted"] = e.budget_exhausted;
    emit(out, j);
    return kOk;
  };
  auto value_out = [&](const FunctionalValue& v) {
    emit(out, value_to_json(v));
    return kOk;
  };

  if (id == "volume") return require_count(ks, 1, id), value_out(volume(ks[0]));
  if (id == "polar_volume") return require_count(ks, 1, id), value_out(polar_volume(ks[0].support));
  if (id == "volume_radial") {
    require_count(ks, 1, id);
    return value_out(volume_radial(radial_function(ks[0].support)));
  }
  if (id == "dual_mixed_volume") {
    const auto stars = radial_all(tuple(ks, n, id));
    return value_out(dual_mixed_volume(stars));
  }
  if (id == "dual_mixed_volume_i") {
    require_count(ks, 2, id);
    const auto stars = radial_all(ks);
    return value_out(dual_mixed_volume_i(stars[0], stars[1], i()));
  }
  if (id == "p_mixed_volume") {
    require_count(ks, 2, id);
    return value_out(p_mixed_volume(ks[0], ks[1].support, p()));
  }
  if (id == "p_mixed_volume_multi") {
    require_count(ks, 2 * n, id);
    std::vector<SmoothBody> K(ks.begin(), ks.begin() + n);
    std::vector<ConvexSupportBody> Q;
    for (int k = n; k < 2 * n; ++k) Q.push_back(ks[k].support);
    return value_out(p_mixed_volume_multi(K, Q, p()));
  }
  if (id == "mixed_p_affine") return value_out(mixed_p_affine(tuple(ks, n, id), p()));
  if (id == "asp_i") {
    require_count(ks, 2, id);
    return value_out(asp_i(ks[0], ks[1], p(), i()));
  }
  if (id == "p_curvature_image") {
    require_count(ks, 1, id);
    const CurvatureImage img = p_curvature_image(ks[0], p());
    FunctionalValue v;
    v.value = img.volume;
    v.meta.id = "p_curvature_image";
    v.meta.p = p();
    v.meta.resolution = o.resolution;
    v.meta.extra["residual"] = img.residual;
    json j = value_to_json(v);
    j["radius"] = range(img.body.rho);
    j["body"] = star_to_json(img.body);
    emit(out, j);
    return kOk;
  }
  if (id == "classical_mixed_volume_2d") {
    require_count(ks, 2, id);
    return value_out(classical_mixed_volume_2d(ks[0], ks[1]));
  }
  if (id == "classical_mixed_volume_nd") return value_out(classical_mixed_volume_nd(tuple(ks, n, id)));
  if (id == "p_surface_area") return require_count(ks, 1, id), value_out(p_surface_area(ks[0], p()));
  if (id == "estimate_G") {
    const int a = alpha_of(o);
    return estimate_out(estimate_G(a, tuple(ks, n, id), p(), search_config(o)));
  }
  if (id == "estimate_G_tilde") {
    require_count(ks, 1, id);
    return estimate_out(estimate_G_tilde(ks[0], p(), search_config(o)));
  }
  if (id == "estimate_G_i") {
    require_count(ks, 2, id);
    const int a = alpha_of(o);
    return estimate_out(estimate_G_i(a, ks[0], ks[1], p(), i(), search_config(o)));
  }
  if (id == "estimate_asp1") return estimate_out(estimate_asp1(tuple(ks, n, id), p(), search_config(o)));
  if (id == "vpn_test") {
    const auto q = vpn_test(tuple(ks, n, id), p());
    json j = {{"id", "vpn_test"}, {"present", q.has_value()}};
    if (q) j["body"] = support_to_json(*q);
    emit(out, j);
    return kOk;
  }
  throw UsageError("unknown functional '" + id + "'");
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.positional.size() < 2) throw UsageError("usage: verify <RULE>... | all");
  harness::SuiteConfig cfg;
  for (std::size_t k = 1; k < o.positional.size(); ++k) {
    if (o.positional[k] == "all") {
      for (const auto& r : harness::catalogue()) cfg.rules.push_back(r.id);
    } else {
      harness::find_rule(o.positional[k]);
      cfg.rules.push_back(o.positional[k]);
    }
  }
  cfg.count = o.count;
  cfg.seed = o.seed;
  cfg.dim = o.dim;
  cfg.resolution = o.resolution;
  cfg.p_list = number_list(o.p);
  cfg.i_list = number_list(o.i);
  cfg.search = search_config(o);
  if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");

  const harness::SuiteReport report = harness::fuzz_suite(cfg);
  if (!o.out.empty()) {
    write_file(o.out, o.format == "csv" ? harness::to_csv(report) : harness::to_json(report).dump(1) + "\n");
  }
  for (const auto& [rule, t] : report.per_rule) {
    out << rule << ": verified " << t.verified << " (certified " << t.verified_certified
        << ", instance " << t.verified_instance << "), inconclusive " << t.inconclusive
        << ", violated " << t.violated << ", report-only " << t.report_only << ", skipped "
        << t.skipped << ", errors " << t.errors << ", inconclusive rate " << t.inconclusive_rate()
        << "\n";
  }
  json reports = json::array();
  for (const auto& c : report.cases) {
    if (c.verdict == harness::Verdict::kViolated || c.verdict == harness::Verdict::kError) {
      out << "  " << harness::to_string(c.verdict) << ": " << c.rule << " case " << c.index
          << " seed " << c.seed << (c.message.empty() ? "" : " (" + c.message + ")") << "\n";
    }
    if (o.list_reports) {
      for (const auto& item : c.reports) {
        out << "  report " << c.rule << " case " << c.index << ": " << item.label << " = "
            << item.ratio << "\n";
        reports.push_back({{"rule", c.rule}, {"index", c.index}, {"label", item.label},
                           {"value", item.value.value}, {"ratio", item.ratio}});
      }
    }
  }
  json per_rule = json::object();
  for (const auto& [rule, t] : report.per_rule) per_rule[rule] = harness::to_json(t);
  const int code = report.total.violated > 0 ? kViolations
                   : report.total.errors > 0 ? kFailure
                                             : kOk;
  json summary = {{"command", "verify"}, {"suite", report.suite}, {"seed", report.seed},
                  {"count", report.count},  {"resolution", report.resolution},
                  {"tallies", harness::to_json(report.total)}, {"per_rule", per_rule},
                  {"exit", code}};
  if (!o.out.empty()) summary["out"] = o.out;
  if (o.list_reports) summary["reports"] = reports;
  emit(out, summary);
  return code;
}

std::string csv_help() {
  std::string s = "CSV columns (verify --format csv), in order:\n  ";
  const auto& cols = harness::csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) s += (k ? "," : "") + cols[k];
  s += "\nExit codes: 0 ok, 1 internal error, 2 usage/schema/class error, 3 violations.\n";
  s += "GEOKIT_THREADS caps the suite thread count.";
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"geokit: mixed L_p geominimal surface areas and their inequalities"};
  app.footer(csv_help());
  app.add_option("--dim", o.dim, "Ambient dimension")->check(CLI::Range(2, 3));
  app.add_option("--resolution", o.resolution, "Sphere grid resolution (power of two >= 64)");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--p", o.p, "p value, or comma list for verify");
  app.add_option("--i", o.i, "i value, or comma list for verify");
  app.add_option("--alpha", o.alpha, "Geominimal variant 1, 2 or 3");
  app.add_option("--count", o.count, "Cases per rule");
  app.add_option("--family", o.family, "Competitor family: fourier, ellipsoid, radial_grid");
  app.add_option("--starts", o.starts, "Simplex starts per estimate");
  app.add_option("--out", o.out, "Output file");
  app.add_option("--format", o.format, "Report format: json or csv");
  app.add_option("--r", o.r, "Ball radius (body make ball)");
  app.add_option("--A", o.matrix, "Row-major matrix (body make ellipsoid)");
  app.add_option("--coeffs", o.coeffs, "Fourier coefficients, e.g. c0=1,a2=0.1");
  app.add_flag("--report-only", o.list_reports, "List report-only products (verify)");
  app.add_option("command", o.positional, "body make|show, compute <id>, verify <RULE>...");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << "\n";
    out << "functionals: ";
    for (const auto& id : compute_ids()) out << id << ' ';
    out << "\nrules: ";
    for (const auto& r : harness::catalogue()) out << r.id << ' ';
    out << "\n";
    emit(out, {{"command", "help"}});
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    emit(out, {{"error", e.what()}, {"exit", kUsage}});
    return kUsage;
  }

  try {
    if (o.positional.empty()) throw UsageError("missing command");
    const std::string& cmd = o.positional[0];
    if (cmd == "body") {
      if (o.positional.size() >= 2 && o.positional[1] == "make") return cmd_body_make(o, out);
      if (o.positional.size() >= 2 && o.positional[1] == "show") return cmd_body_show(o, out);
      throw UsageError("usage: body make|show");
    }
    if (cmd == "compute") return cmd_compute(o, out);
    if (cmd == "verify") return cmd_verify(o, out);
    throw UsageError("unknown command '" + cmd + "'");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    emit(out, {{"error", e.what()}, {"exit", kUsage}});
    return kUsage;
  } catch (const std::invalid_argument& e) {  // includes UnknownRule and bad classes
    err << "error: " << e.what() << "\n";
    emit(out, {{"error", e.what()}, {"exit", kUsage}});
    return kUsage;
  } catch (const std::domain_error& e) {  // convexity margin and other class failures
    err << "error: " << e.what() << "\n";
    emit(out, {{"error", e.what()}, {"exit", kUsage}});
    return kUsage;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    emit(out, {{"error", e.what()}, {"exit", kUsage}});
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    emit(out, {{"error", e.what()}, {"exit", kFailure}});
    return kFailure;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace geokit::cli
