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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "geokit_cli/cli.hpp"

namespace geokit::cli {
namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

struct Result {
  int code;
  std::string out;
  json summary;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "geokit");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  const std::string text = out.str();
  std::string last = text.substr(0, text.size() - 1);
  last = last.substr(last.rfind('\n') == std::string::npos ? 0 : last.rfind('\n') + 1);
  return {code, text, json::parse(last)};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("geokit_cli_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

TEST(Cli, MakeBall) {
  const Result r = invoke({"body", "make", "ball", "--dim", "2", "--r", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.summary["kind"], "ball");
  EXPECT_EQ(r.summary["params"], 1.0);
}

TEST(Cli, MakeFourierAndConvexityFailure) {
  EXPECT_EQ(invoke({"body", "make", "fourier", "--coeffs", "a2=0.1"}).code, 0);
  const Result bad = invoke({"body", "make", "fourier", "--coeffs", "a2=0.5"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(bad.summary.contains("error"));
}

TEST(Cli, ShowEllipse) {
  const Result r = invoke({"body", "show", "ellipsoid:2,0,0,1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(r.summary["volume"]["value"].get<double>(), 2 * kPi, 1e-8);
  EXPECT_EQ(r.summary["centered"], true);
  EXPECT_EQ(r.summary["in_F0_plus"], true);
  EXPECT_EQ(r.summary["vpn_candidate"], true);
}

TEST(Cli, RoundTripThroughFiles) {
  for (const std::string kind : {"ball", "fourier", "random"}) {
    const std::string path = temp_path(kind + ".json");
    std::vector<std::string> args{"body", "make", kind, "--out", path, "--seed", "5"};
    if (kind == "fourier") args.insert(args.end(), {"--coeffs", "c0=1,a3=0.05,b2=-0.04"});
    ASSERT_EQ(invoke(args).code, 0);
    const std::string written = slurp(path);
    // Every command accepts the file; re-emitting it is byte-identical.
    const Result again = invoke({"body", "show", path});
    EXPECT_EQ(again.code, 0);
    const Result value = invoke({"compute", "volume", path});
    EXPECT_EQ(value.code, 0);
    EXPECT_NEAR(value.summary["value"].get<double>(), again.summary["volume"]["value"].get<double>(),
                1e-15);
    const std::string copy = temp_path(kind + "_copy.json");
    std::ofstream(copy) << json::parse(written).dump() << "\n";
    EXPECT_EQ(slurp(copy), written);
    std::filesystem::remove(path);
    std::filesystem::remove(copy);
  }
}

TEST(Cli, ComputeAffineAreaOfDisks) {
  const Result r = invoke({"compute", "mixed_p_affine", "ball:1", "ball:1", "--p", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(r.summary["value"].get<double>(), 2 * kPi, 1e-10);
  EXPECT_EQ(r.summary["kind"], "quadrature");
}

TEST(Cli, ComputeEstimateOnEllipses) {
  const Result as = invoke({"compute", "mixed_p_affine", "ellipsoid:1.5,0.2,0,0.8",
                            "ellipsoid:1.5,0.2,0,0.8", "--p", "1"});
  const Result g = invoke({"compute", "estimate_G", "ellipsoid:1.5,0.2,0,0.8",
                           "ellipsoid:1.5,0.2,0,0.8", "--p", "1", "--alpha", "3"});
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(g.summary["kind"], "optimizer-upper-bound");
  EXPECT_NEAR(g.summary["value"].get<double>() / as.summary["value"].get<double>(), 1.0, 1e-2);
  EXPECT_TRUE(g.summary.contains("budget_exhausted"));
}

TEST(Cli, ComputeCurvatureImageOfBall) {
  const Result r = invoke({"compute", "p_curvature_image", "ball:2", "--p", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(r.summary["radius"]["min"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(r.summary["radius"]["max"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, ArityAndClassErrors) {
  EXPECT_EQ(invoke({"compute", "asp_i", "ball:1", "--p", "1", "--i", "1"}).code, 2);
  EXPECT_EQ(invoke({"compute", "mixed_p_affine", "ball:1", "--p", "-2"}).code, 2);
  EXPECT_EQ(invoke({"compute", "estimate_G", "ball:1", "--p", "1"}).code, 2);  // no alpha
  EXPECT_EQ(invoke({"compute", "nonsense", "ball:1"}).code, 2);
  EXPECT_EQ(invoke({"compute", "volume", "missing_file.json"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
}

TEST(Cli, SchemaViolation) {
  const std::string path = temp_path("bad.json");
  std::ofstream(path) << R"({"kind":"ball","dim":2})";
  EXPECT_EQ(invoke({"body", "show", path}).code, 2);
  std::filesystem::remove(path);
}

TEST(Cli, VerifyDualHolder) {
  const std::string path = temp_path("dualh.json");
  const Result r = invoke({"verify", "DUALH", "--count", "100", "--seed", "1", "--out", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.summary["tallies"]["violated"], 0);
  EXPECT_EQ(json::parse(slurp(path))["cases"].size(), 100u);
  std::filesystem::remove(path);
}

TEST(Cli, VerifyOrderIsStructural) {
  const std::string path = temp_path("order.json");
  const Result r = invoke({"verify", "ORDER", "--count", "20", "--out", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.summary["tallies"]["verified"], 20);
  const json cases = json::parse(slurp(path))["cases"];
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases) EXPECT_EQ(c["soundness"], "structural");
  std::filesystem::remove(path);
}

TEST(Cli, VerifySantaloReportOnly) {
  const Result r = invoke({"verify", "SANTALO", "--count", "8", "--p", "-3", "--report-only"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.summary["tallies"]["report_only"], 8);
  EXPECT_EQ(r.summary["reports"].size(), 8u);
  for (const auto& item : r.summary["reports"]) EXPECT_FALSE(item.contains("verdict"));
}

TEST(Cli, VerifyCsvAndUnknownRule) {
  const std::string path = temp_path("dualh.csv");
  EXPECT_EQ(invoke({"verify", "DUALH", "--count", "2", "--format", "csv", "--out", path}).code, 0);
  EXPECT_EQ(slurp(path).rfind("rule,index,seed", 0), 0u);
  std::filesystem::remove(path);
  EXPECT_EQ(invoke({"verify", "NOPE"}).code, 2);
  EXPECT_EQ(invoke({"verify", "DUALH", "--p", "-2"}).code, 2);
}

TEST(Cli, HelpDocumentsCsvColumns) {
  const Result r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rule,index,seed,resolution"), std::string::npos);
}

TEST(Cli, DeterministicReports) {
  const std::string a = temp_path("a.json"), b = temp_path("b.json");
  invoke({"verify", "VPH", "ORDER", "--count", "4", "--seed", "9", "--out", a});
  invoke({"verify", "VPH", "ORDER", "--count", "4", "--seed", "9", "--out", b});
  EXPECT_EQ(slurp(a), slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

}  // namespace
}  // namespace geokit::cli
