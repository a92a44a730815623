/* Copyright 2026 The ContourKit Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
// Serial reference kernels against the OpenMP ones on a fan mesh. The
// argument is the number of contour points (= faces).
#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "contourkit/render.hpp"

namespace ck = contourkit;

namespace {

ck::ContourMesh fan_mesh(int points) {
  ck::Contour c;
  for (int i = 0; i < points; ++i) {
    const double a = 2.0 * std::numbers::pi * i / points;
    const double r = 0.35 + 0.1 * std::cos(5.0 * a);
    c.points.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return ck::build_external_shrink(c, 0.0);
}

ck::RenderConfig config(int res) {
  ck::RenderConfig cfg;
  cfg.width = cfg.height = res;
  return cfg;
}

std::vector<double> upstream(const ck::RenderConfig& cfg) {
  std::vector<double> up(static_cast<std::size_t>(cfg.width) * cfg.height);
  for (std::size_t i = 0; i < up.size(); ++i) up[i] = std::sin(0.37 * static_cast<double>(i));
  return up;
}

void BM_RenderReference(benchmark::State& state) {
  const auto mesh = fan_mesh(static_cast<int>(state.range(0)));
  const auto cfg = config(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ck::reference::render(mesh, cfg));
}

void BM_RenderParallel(benchmark::State& state) {
  const auto mesh = fan_mesh(static_cast<int>(state.range(0)));
  const auto cfg = config(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ck::render(mesh, cfg));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_BackwardReference(benchmark::State& state) {
  const auto mesh = fan_mesh(static_cast<int>(state.range(0)));
  const auto cfg = config(static_cast<int>(state.range(1)));
  const auto up = upstream(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(ck::reference::render_backward(mesh, cfg, up));
}

void BM_BackwardParallel(benchmark::State& state) {
  const auto mesh = fan_mesh(static_cast<int>(state.range(0)));
  const auto cfg = config(static_cast<int>(state.range(1)));
  const auto up = upstream(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(ck::render_backward(mesh, cfg, up));
  state.counters["threads"] = omp_get_max_threads();
}

void Sizes(benchmark::internal::Benchmark* b) {
  for (int faces : {16, 32, 64}) {
    for (int res : {64, 128}) b->Args({faces, res});
  }
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_RenderReference)->Apply(Sizes);
BENCHMARK(BM_RenderParallel)->Apply(Sizes);
BENCHMARK(BM_BackwardReference)->Apply(Sizes);
BENCHMARK(BM_BackwardParallel)->Apply(Sizes);

BENCHMARK_MAIN();
