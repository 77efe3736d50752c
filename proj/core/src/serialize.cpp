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

#include "geokit/serialize.hpp"

#include <cmath>

namespace geokit {
namespace {

using nlohmann::json;

json matrix_rows(const Eigen::MatrixXd& A) {
  json rows = json::array();
  for (int r = 0; r < A.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json shape_record(const ConvexSupportBody& body, const std::vector<double>* f) {
  json j;
  j["dim"] = body.dim();
  if (const auto* ball = std::get_if<BallShape>(&body.shape)) {
    j["kind"] = "ball";
    j["params"] = ball->r;
  } else if (const auto* ell = std::get_if<EllipsoidShape>(&body.shape)) {
    j["kind"] = "ellipsoid";
    j["params"] = matrix_rows(ell->A);
  } else if (const auto* fs = body.fourier()) {
    j["kind"] = "fourier_support";
    j["params"] = {{"c0", fs->c0}, {"a", fs->a}, {"b", fs->b}};
  } else {
    j["kind"] = "sampled";
    json params = {{"h", body.h}};
    if (f) params["f"] = *f;
    j["params"] = std::move(params);
  }
  return j;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing field: ") + key);
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bad field ") + key + ": " + e.what());
  }
}

int implied_resolution(int dim, std::size_t samples) {
  if (dim == 2) return static_cast<int>(samples);
  if (dim == 3) {
    const int m = static_cast<int>(std::lround(std::sqrt(2.0 * samples)));
    if (static_cast<std::size_t>(m) * m / 2 != samples) {
      throw SchemaError("sample count does not match a product grid");
    }
    return m;
  }
  throw SchemaError("sampled bodies are supported for dim 2 and 3");
}

}  // namespace

json body_to_json(const SmoothBody& body) {
  return shape_record(body.support, &body.f);
}

json support_to_json(const ConvexSupportBody& body) {
  return shape_record(body, nullptr);
}

json star_to_json(const StarBody& body) {
  return {{"kind", "sampled"}, {"dim", body.dim()}, {"params", {{"rho", body.rho}}}};
}

SmoothBody body_from_json(const json& j, int resolution) {
  const std::string kind = field<std::string>(j, "kind");
  const int dim = field<int>(j, "dim");
  if (dim < 2) throw SchemaError("dim must be >= 2");
  if (!j.contains("params")) throw SchemaError("missing field: params");
  const json& params = j.at("params");
  if (kind == "sampled") {
    auto h = field<std::vector<double>>(params, "h");
    auto f = field<std::vector<double>>(params, "f");
    if (h.size() != f.size()) throw SchemaError("h and f lengths differ");
    const int res = implied_resolution(dim, h.size());
    if (resolution != 0 && resolution != res) {
      throw SchemaError("sampled body resolution " + std::to_string(res) +
                        " does not match requested " + std::to_string(resolution));
    }
    return make_supplied_body(build_default_grid(dim, res), std::move(h), std::move(f));
  }
  if (resolution <= 0) throw SchemaError("a grid resolution is required");
  GridPtr grid = build_default_grid(dim, resolution);
  if (kind == "ball") {
    if (!params.is_number()) throw SchemaError("ball params must be the radius");
    return make_ball(grid, params.get<double>());
  }
  if (kind == "ellipsoid") {
    std::vector<std::vector<double>> rows;
    try {
      rows = params.get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
      throw SchemaError(std::string("ellipsoid params: ") + e.what());
    }
    if (static_cast<int>(rows.size()) != dim) throw SchemaError("matrix row count != dim");
    Eigen::MatrixXd A(dim, dim);
    for (int r = 0; r < dim; ++r) {
      if (static_cast<int>(rows[r].size()) != dim) throw SchemaError("matrix is not square");
      for (int c = 0; c < dim; ++c) A(r, c) = rows[r][c];
    }
    return make_ellipsoid(grid, A);
  }
  if (kind == "fourier_support") {
    if (dim != 2) throw SchemaError("fourier_support bodies are planar");
    FourierSupport fs;
    fs.c0 = field<double>(params, "c0");
    fs.a = params.contains("a") ? field<std::vector<double>>(params, "a") : std::vector<double>{};
    fs.b = params.contains("b") ? field<std::vector<double>>(params, "b") : std::vector<double>{};
    return make_fourier_body(grid, fs);
  }
  throw SchemaError("unknown body kind: " + kind);
}

json value_to_json(const FunctionalValue& v) {
  json meta = {{"id", v.meta.id}, {"resolution", v.meta.resolution}};
  meta["p"] = v.meta.p ? json(*v.meta.p) : json(nullptr);
  meta["i"] = v.meta.i ? json(*v.meta.i) : json(nullptr);
  json extra = json::object();
  for (const auto& [k, x] : v.meta.extra) extra[k] = x;
  meta["extra"] = std::move(extra);
  return {{"value", v.value}, {"kind", to_string(v.kind)}, {"err", v.err},
          {"meta", std::move(meta)}};
}

FunctionalValue value_from_json(const json& j) {
  FunctionalValue v;
  v.value = field<double>(j, "value");
  v.err = field<double>(j, "err");
  try {
    v.kind = value_kind_from_string(field<std::string>(j, "kind"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  if (j.contains("meta")) {
    const json& m = j.at("meta");
    if (m.contains("id")) v.meta.id = m.at("id").get<std::string>();
    if (m.contains("resolution")) v.meta.resolution = m.at("resolution").get<int>();
    if (m.contains("p") && !m.at("p").is_null()) v.meta.p = m.at("p").get<double>();
    if (m.contains("i") && !m.at("i").is_null()) v.meta.i = m.at("i").get<double>();
    if (m.contains("extra")) {
      for (const auto& [k, x] : m.at("extra").items()) v.meta.extra[k] = x.get<double>();
    }
  }
  return v;
}

json estimate_to_json(const GeoEstimate& e) {
  json witness = json::array();
  for (const auto& w : e.witness) witness.push_back(support_to_json(w));
  for (const auto& w : e.star_witness) witness.push_back(star_to_json(w));
  json trace = json::array();
  for (const auto& t : e.trace) {
    trace.push_back({{"start", t.start}, {"origin", t.origin}, {"initial", t.initial},
                     {"value", t.value}, {"iterations", t.iterations},
                     {"converged", t.converged}});
  }
  return {{"value", value_to_json(e.value)},
          {"alpha", e.alpha},
          {"source", e.source},
          {"budget_exhausted", e.budget_exhausted},
          {"witness", std::move(witness)},
          {"trace", std::move(trace)}};
}

}  // namespace geokit
