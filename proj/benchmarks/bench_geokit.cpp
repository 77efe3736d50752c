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


#include <benchmark/benchmark.h>

#include <random>

#include "geokit/bodies.hpp"
#include "geokit/functionals.hpp"
#include "geokit/geominimal.hpp"
#include "geokit/harness.hpp"

namespace {

using namespace geokit;

void BM_Volume(benchmark::State& state) {
  const GridPtr g = build_default_grid(2, static_cast<int>(state.range(0)));
  const SmoothBody k = random_smooth_body(g, 7, 5, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(volume(k).value);
}
BENCHMARK(BM_Volume)->Arg(128)->Arg(512)->Arg(2048);

void BM_MixedPAffine(benchmark::State& state) {
  const GridPtr g = build_default_grid(2, static_cast<int>(state.range(0)));
  const std::vector<SmoothBody> ks{random_smooth_body(g, 1, 5, 0.05), random_smooth_body(g, 2, 5, 0.05)};
  for (auto _ : state) benchmark::DoNotOptimize(mixed_p_affine(ks, 2.0).value);
}
BENCHMARK(BM_MixedPAffine)->Arg(128)->Arg(512);

void BM_CurvatureImage(benchmark::State& state) {
  const GridPtr g = build_default_grid(2, 128);
  const SmoothBody k = random_smooth_body(g, 3, 5, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(p_curvature_image(k, -1.0).residual);
}
BENCHMARK(BM_CurvatureImage);

void BM_EstimateG(benchmark::State& state) {
  const GridPtr g = build_default_grid(2, 128);
  const std::vector<SmoothBody> ks{random_smooth_body(g, 4, 5, 0.05), random_smooth_body(g, 5, 5, 0.05)};
  SearchConfig cfg;
  cfg.seed = 1;
  const int alpha = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_G(alpha, ks, 1.0, cfg).value.value);
}
BENCHMARK(BM_EstimateG)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Suite(benchmark::State& state) {
  harness::SuiteConfig cfg;
  cfg.rules = {"DUALH", "VPH", "PROP32"};
  cfg.count = 8;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(harness::fuzz_suite(cfg).total.verified);
}
BENCHMARK(BM_Suite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
