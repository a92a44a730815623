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
#include <cmath>
#include <random>

#include "contourkit/losses.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace contourkit;

namespace {

SoftMask soft_from(const std::vector<double>& v, int w, int h) {
  SoftMask m(w, h);
  m.values = v;
  return m;
}

HardMask hard_from(const std::vector<int>& v, int w, int h) {
  HardMask m(w, h);
  for (std::size_t i = 0; i < v.size(); ++i) m.bits[i] = static_cast<std::uint8_t>(v[i]);
  return m;
}

}  // namespace

TEST_CASE("loss names round trip") {
  for (LossKind k : {LossKind::kLovasz, LossKind::kMse, LossKind::kBce, LossKind::kDice}) {
    CHECK(parse_loss_kind(loss_kind_name(k)) == k);
  }
  CHECK_FALSE(parse_loss_kind("l2").has_value());
}

TEST_CASE("hand-worked four pixel Lovasz case") {
  // errors |p - g| = 0.1, 0.6, 0.3, 0; sorted: 0.6 (fg), 0.3 (bg), 0.1 (fg)
  // Jaccard steps 1/2, 2/3, 1 -> 0.6/2 + 0.3/6 + 0.1/3 = 23/60.
  const PixelLoss l = lovasz_hinge(soft_from({0.9, 0.4, 0.3, 0.0}, 2, 2), hard_from({1, 1, 0, 0}, 2, 2));
  CHECK(std::abs(l.value - 23.0 / 60.0) <= 1e-9);
  CHECK(l.grad[0] == doctest::Approx(-1.0 / 3.0));
  CHECK(l.grad[1] == doctest::Approx(-0.5));
  CHECK(l.grad[2] == doctest::Approx(1.0 / 6.0));
  CHECK(l.grad[3] == 0.0);
}

TEST_CASE("Lovasz at binary predictions is exactly 1 - IoU") {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.4);
  for (int t = 0; t < 100; ++t) {
    const int w = 3 + t % 17, h = 2 + t % 11;
    std::vector<int> g(static_cast<std::size_t>(w * h));
    std::vector<double> p(g.size());
    HardMask pm(w, h);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = coin(rng);
      p[i] = coin(rng) ? 1.0 : 0.0;
      pm.bits[i] = p[i] > 0.5;
    }
    const HardMask gm = hard_from(g, w, h);
    CHECK(std::abs(lovasz_hinge(soft_from(p, w, h), gm).value - (1.0 - oracle::iou(pm, gm))) <= 1e-12);
  }
}

TEST_CASE("Lovasz matches the threshold-integral definition") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int w = 4 + t % 5, h = 3 + t % 4;
    std::vector<int> g(static_cast<std::size_t>(w * h));
    std::vector<double> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = u(rng) < 0.5;
      p[i] = u(rng);
    }
    const double got = lovasz_hinge(soft_from(p, w, h), hard_from(g, w, h)).value;
    CHECK(got == doctest::Approx(oracle::lovasz_integral(p, g)).epsilon(1e-12));
  }
}

TEST_CASE("Lovasz on all-background ground truth") {
  const PixelLoss l = lovasz_hinge(soft_from({0.0, 0.0, 0.0}, 3, 1), hard_from({0, 0, 0}, 3, 1));
  CHECK(l.value == 0.0);
  const PixelLoss w = lovasz_hinge(soft_from({0.2, 0.0, 0.0}, 3, 1), hard_from({0, 0, 0}, 3, 1));
  CHECK(w.value == doctest::Approx(0.2));
}

TEST_CASE("pixel loss gradients match finite differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const int w = 5, h = 4;
  std::vector<int> g(20);
  std::vector<double> p(20);
  for (int i = 0; i < 20; ++i) {
    g[i] = u(rng) < 0.5;
    p[i] = u(rng);
  }
  const HardMask gm = hard_from(g, w, h);
  for (LossKind k : {LossKind::kLovasz, LossKind::kMse, LossKind::kBce, LossKind::kDice}) {
    const PixelLoss l = pixel_loss(k, soft_from(p, w, h), gm);
    for (int i = 0; i < 20; ++i) {
      const double fd = oracle::central_difference(
          [&](double x) {
            std::vector<double> q = p;
            q[i] = x;
            return pixel_loss(k, soft_from(q, w, h), gm).value;
          },
          p[i], 1e-7);
      CHECK(l.grad[i] == doctest::Approx(fd).epsilon(1e-5).scale(1e-6));
    }
  }
}

TEST_CASE("closed-form values of MSE, BCE and Dice") {
  const SoftMask p = soft_from({0.5, 1.0}, 2, 1);
  const HardMask g = hard_from({1, 0}, 2, 1);
  CHECK(pixel_loss(LossKind::kMse, p, g).value == doctest::Approx((0.25 + 1.0) / 2));
  const double bce = (-std::log(0.5) - std::log(kBceClamp)) / 2;
  CHECK(pixel_loss(LossKind::kBce, p, g).value == doctest::Approx(bce));
  // Clamped entries carry no gradient.
  CHECK(pixel_loss(LossKind::kBce, p, g).grad[1] == 0.0);
  CHECK(pixel_loss(LossKind::kDice, p, g).value == doctest::Approx(1.0 - (2 * 0.5 + 1) / (1.5 + 1 + 1)));
  CHECK(pixel_loss(LossKind::kDice, soft_from({0, 0}, 2, 1), hard_from({0, 0}, 2, 1)).value == 0.0);
  CHECK_THROWS(pixel_loss(LossKind::kMse, p, hard_from({1, 0, 0}, 3, 1)));
}

TEST_CASE("reconstruction error of a shape against its own fill") {
  const Contour c{{{2, 2}, {12, 3}, {10, 12}, {3, 9}}};
  CHECK(reconstruction_error(c, fill_polygon(c, 16, 16)) == 0.0);
  const Contour shifted{{{4, 2}, {14, 3}, {12, 12}, {5, 9}}};
  const double e = reconstruction_error(shifted, fill_polygon(c, 16, 16));
  CHECK(e == doctest::Approx(1.0 - oracle::iou(oracle::fill(shifted, 16, 16), oracle::fill(c, 16, 16))));
}
