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

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "geokit/bodies.hpp"
#include "geokit/functionals.hpp"
#include "geokit/geominimal.hpp"

namespace geokit {

// Raised for malformed body or value records.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Body records: {kind: ball|ellipsoid|fourier_support|sampled, dim, params}.
//   ball             params = r
//   ellipsoid        params = row-major A
//   fourier_support  params = {c0, a: [...], b: [...]}
//   sampled          params = {h: [...], f: [...]}  (f optional for supports)
nlohmann::json body_to_json(const SmoothBody& body);
nlohmann::json support_to_json(const ConvexSupportBody& body);
nlohmann::json star_to_json(const StarBody& body);

// Builds the body on the default grid of the given resolution. Sampled
// records carry their own grid size, and `resolution` must match it (0
// accepts whatever the record implies).
SmoothBody body_from_json(const nlohmann::json& j, int resolution);

nlohmann::json value_to_json(const FunctionalValue& v);
FunctionalValue value_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const GeoEstimate& e);

}  // namespace geokit
