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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "contourkit/harness.hpp"

namespace contourkit {
namespace {

constexpr double kMinRadiusRatio = 0.15;
constexpr double kNominalRadius = 40.0;
constexpr double kMaxRadius = 60.0;  // keeps a 4 px margin on the 128 grid
constexpr int kProbeSamples = 2048;

double radius_factor(const std::array<double, 5>& a, const std::array<double, 5>& phi,
                     double theta) {
  double f = 1.0;
  for (int h = 2; h <= 6; ++h) f += a[h - 2] * std::cos(h * theta + phi[h - 2]);
  return f;
}

}  // namespace

std::optional<SynthMode> parse_synth_mode(std::string_view name) {
  if (name == "blob") return SynthMode::kBlob;
  if (name == "star") return SynthMode::kStar;
  if (name == "concave") return SynthMode::kConcave;
  return std::nullopt;
}

std::string_view synth_mode_name(SynthMode mode) {
  switch (mode) {
    case SynthMode::kBlob: return "blob";
    case SynthMode::kStar: return "star";
    case SynthMode::kConcave: return "concave";
  }
  return "unknown";
}

Contour fourier_shape(const std::array<double, 5>& amplitudes,
                      const std::array<double, 5>& phases, double r0, Point2 center,
                      int points) {
  if (points < 3) throw std::invalid_argument("fourier_shape: need at least 3 points");
  Contour c;
  c.points.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / points;
    const double r = r0 * radius_factor(amplitudes, phases, theta);
    c.points.push_back({center.x + r * std::cos(theta), center.y + r * std::sin(theta)});
  }
  return c;
}

ShapeCorpus generate_synthetic_corpus(int n, SynthMode mode, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_synthetic_corpus: n must be positive");
  ShapeCorpus corpus;
  corpus.entries.reserve(static_cast<std::size_t>(n));
  const Point2 center{kSynthDims / 2.0, kSynthDims / 2.0};
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::array<double, 5> a{};
    std::array<double, 5> phi{};
    auto amplitude = [&](double limit) { return limit * (2.0 * unit(rng) - 1.0); };
    switch (mode) {
      case SynthMode::kBlob:
        for (double& v : a) v = amplitude(0.1);
        break;
      case SynthMode::kConcave:
        for (double& v : a) v = amplitude(0.35);
        break;
      case SynthMode::kStar: {
        for (double& v : a) v = amplitude(0.03);
        const int dominant = 1 + static_cast<int>(unit(rng) * 4.0);  // harmonic 3..6
        a[static_cast<std::size_t>(std::min(dominant, 4))] = 0.25 + 0.15 * unit(rng);
        break;
      }
    }
    for (double& p : phi) p = 2.0 * std::numbers::pi * unit(rng);

    double lo = 1.0;
    double hi = 1.0;
    for (int s = 0; s < kProbeSamples; ++s) {
      const double f = radius_factor(a, phi, 2.0 * std::numbers::pi * s / kProbeSamples);
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    if (lo < kMinRadiusRatio) {
      // f - 1 is linear in the amplitudes.
      const double scale = (1.0 - kMinRadiusRatio) / (1.0 - lo);
      for (double& v : a) v *= scale;
      hi = 1.0 + scale * (hi - 1.0);
    }
    const double r0 = std::min(kNominalRadius, kMaxRadius / hi);

    ShapeEntry e;
    e.contour = fourier_shape(a, phi, r0, center, kSynthPoints);
    e.width = kSynthDims;
    e.height = kSynthDims;
    e.category = static_cast<int>(mode) + 1;
    e.image_id = i;
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

}  // namespace contourkit
