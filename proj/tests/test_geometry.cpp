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

#include "contourkit/geometry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace contourkit;

namespace {

Contour square(double x0, double y0, double side) {
  return Contour{{{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}}};
}

Contour reversed(Contour c) {
  std::reverse(c.points.begin(), c.points.end());
  return c;
}

}  // namespace

TEST_CASE("signed area follows orientation") {
  const Contour sq = square(0, 0, 2);
  CHECK(signed_area(sq) == doctest::Approx(4.0));
  CHECK(signed_area(reversed(sq)) == doctest::Approx(-4.0));
  CHECK(polygon_area(reversed(sq)) == doctest::Approx(4.0));
  CHECK(perimeter(sq) == doctest::Approx(8.0));
}

TEST_CASE("normalize_orientation keeps the first vertex") {
  const Contour cw = reversed(square(1, 1, 3));
  const Contour ccw = normalize_orientation(cw);
  CHECK(ccw[0] == cw[0]);
  CHECK(signed_area(ccw) > 0.0);
  const Contour again = normalize_orientation(ccw);
  CHECK(again.points == ccw.points);
}

TEST_CASE("validate_contour rejects short and non-finite input") {
  CHECK_THROWS_AS(validate_contour(Contour{{{0, 0}, {1, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_contour(Contour{{{0, 0}, {1, NAN}, {0, 1}}}), std::invalid_argument);
  CHECK_NOTHROW(validate_contour(square(0, 0, 1)));
}

TEST_CASE("resample spaces points evenly along the boundary") {
  const Contour r = resample_contour(square(0, 0, 1), 8);
  REQUIRE(r.size() == 8);
  CHECK(r[0] == Point2{0, 0});
  CHECK(r[1].x == doctest::Approx(0.5));
  CHECK(r[2].x == doctest::Approx(1.0));
  CHECK(r[3].y == doctest::Approx(0.5));
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Point2 d = r[(i + 1) % r.size()] - r[i];
    CHECK(std::hypot(d.x, d.y) == doctest::Approx(0.5));
  }
}

TEST_CASE("resample of a clockwise polygon comes out counter-clockwise") {
  std::mt19937_64 rng(3);
  const Contour star = reversed(oracle::random_star(rng, 20, {0, 0}, 0.5, 1.0));
  const Contour r = resample_contour(star, 40);
  CHECK(signed_area(r) > 0.0);
  CHECK(r[0] == star[0]);
}

TEST_CASE("resample is idempotent on equal-chord polygons") {
  Contour reg;
  for (int i = 0; i < 24; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 24;
    reg.points.push_back({std::cos(a), std::sin(a)});
  }
  const Contour r = resample_contour(reg, 24);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r[i].x == doctest::Approx(reg[i].x).epsilon(1e-12));
    CHECK(r[i].y == doctest::Approx(reg[i].y).epsilon(1e-12));
  }
}

TEST_CASE("resample rejects degenerate input") {
  CHECK_THROWS(resample_contour(square(0, 0, 1), 2));
  CHECK_THROWS(resample_contour(Contour{{{1, 1}, {1, 1}, {1, 1}}}, 8));
}

TEST_CASE("convex hull and convexity") {
  const Contour l_shape{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
  const Contour hull = convex_hull(l_shape);
  CHECK(hull.size() == 5);
  CHECK(signed_area(hull) == doctest::Approx(3.5));
  CHECK(convexity(l_shape) == doctest::Approx(3.0 / 3.5));
  CHECK(convexity(square(0, 0, 1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(convexity(Contour{{{0, 0}, {1, 1}, {2, 2}}}), std::domain_error);
}

TEST_CASE("convexity lies in (0, 1] for random polygons") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Contour c = oracle::random_star(rng, 5 + t % 30, {0, 0}, 0.1, 1.0);
    const double v = convexity(c);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("fill_polygon matches the crossing-number oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    Contour c;
    if (t % 3 == 0) {
      c = oracle::random_points(rng, 3 + t % 12, -5.0, 37.0);
    } else {
      c = oracle::random_star(rng, 3 + t % 40, {16, 16}, 2.0, 18.0);
    }
    const HardMask got = fill_polygon(c, 32, 32);
    const HardMask want = oracle::fill(c, 32, 32);
    CHECK(got.bits == want.bits);
  }
}

TEST_CASE("fill_polygon pixel-center rule on an integer square") {
  const HardMask m = fill_polygon(square(1, 1, 2), 4, 4);
  CHECK(m.count() == 4);
  CHECK(m.at(1, 1) == 1);
  CHECK(m.at(2, 2) == 1);
  CHECK(m.at(0, 0) == 0);
  CHECK(m.at(3, 3) == 0);
}

TEST_CASE("fill_polygon tolerates off-grid and non-finite input") {
  CHECK(fill_polygon(square(-100, -100, 10), 8, 8).count() == 0);
  CHECK(fill_polygon(square(-100, -100, 1000), 8, 8).count() == 64);
  CHECK(fill_polygon(Contour{{{0, 0}, {NAN, 1}, {3, 3}}}, 8, 8).count() == 0);
}

TEST_CASE("mask_iou") {
  HardMask a(4, 1), b(4, 1);
  a.set(0, 0, true);
  a.set(1, 0, true);
  b.set(1, 0, true);
  b.set(2, 0, true);
  CHECK(mask_iou(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK(mask_iou(HardMask(2, 2), HardMask(2, 2)) == 1.0);
  CHECK_THROWS(mask_iou(HardMask(2, 2), HardMask(3, 2)));
}

TEST_CASE("merge_fragments orders by area and orients each part") {
  const Contour small = reversed(square(10, 10, 1));
  const Contour big = square(0, 0, 3);
  const Contour merged = merge_fragments({small, big});
  REQUIRE(merged.size() == 8);
  CHECK(merged[0] == big[0]);
  CHECK(merged[4] == small[0]);
  CHECK(oracle::shoelace({merged.points.begin() + 4, merged.points.end()}) > 0.0);
  CHECK_THROWS(merge_fragments({}));
}

TEST_CASE("bbox_of") {
  const BBox b = bbox_of(Contour{{{1, 2}, {5, 2}, {3, 8}}});
  CHECK(b.center.x == doctest::Approx(3.0));
  CHECK(b.center.y == doctest::Approx(5.0));
  CHECK(b.width == doctest::Approx(4.0));
  CHECK(b.height == doctest::Approx(6.0));
  CHECK_THROWS(bbox_of(Contour{{{1, 2}, {1, 5}, {1, 8}}}));
}

TEST_CASE("is_star_shaped_about") {
  std::mt19937_64 rng(2);
  const Contour star = oracle::random_star(rng, 30, {1, 1}, 0.2, 1.0);
  CHECK(is_star_shaped_about(star, {1, 1}));
  CHECK_FALSE(is_star_shaped_about(reversed(star), {1, 1}));
  CHECK_FALSE(is_star_shaped_about(star, {5, 5}));
}

TEST_CASE("rotate_start_to_axis picks the +x direction") {
  const Contour c{{{0, 1}, {-1, 0}, {0, -1}, {1, 0.001}}};
  const Contour r = rotate_start_to_axis(c, {0, 0});
  CHECK(r[0] == c[3]);
  CHECK(r[1] == c[0]);
  CHECK(r.size() == c.size());
}
