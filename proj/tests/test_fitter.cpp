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
#include <stdexcept>

#include "contourkit/fitter.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace contourkit;

namespace {

HardMask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
  HardMask m(w, h);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m.set(x, y, true);
  }
  return m;
}

struct Problem {
  HardMask target;
  DctSignature gt;
  BBox box{{0, 0}, 1, 1};
};

// A smooth star in the unit box, its fill on the render grid and its
// full-length signature.
Problem make_problem(const RenderConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Contour c = oracle::random_star(rng, 40, {0, 0}, 0.3, 0.45);
  c = resample_contour(rotate_start_to_axis(c, {0, 0}), 16);
  Problem p;
  p.target = fill_in_viewport(c, cfg);
  p.gt = dct_encode(coord_encode(c, p.box));
  return p;
}

}  // namespace

TEST_CASE("schedule weights") {
  FitSchedule s;
  s.phase1_steps = 10;
  s.lambda1_decay_steps = 4;
  s.phase2_steps = 20;
  CHECK(s.total_steps() == 30);
  CHECK(s.lambda1(0) == 1.0);
  CHECK(s.lambda1(9) == 1.0);
  CHECK(s.lambda1(10) == 1.0);
  CHECK(s.lambda1(11) == 0.75);
  CHECK(s.lambda1(13) == 0.25);
  CHECK(s.lambda1(14) == 0.0);
  CHECK(s.lambda2(9) == 0.0);
  CHECK(s.lambda2(10) == 1.0);
  s.lambda1_decay_steps = 0;
  CHECK(s.lambda1(10) == 0.0);
}

TEST_CASE("schedule validation") {
  FitSchedule s;
  CHECK_NOTHROW(s.validate());
  s.step_size = 0;
  CHECK_THROWS(s.validate());
  s = FitSchedule{};
  s.momentum = 1.0;
  CHECK_THROWS(s.validate());
  s = FitSchedule{};
  s.phase2_steps = -1;
  CHECK_THROWS(s.validate());
}

TEST_CASE("boundary tracing walks the outer pixels once") {
  const Contour c = trace_boundary(rect_mask(5, 4, 1, 1, 4, 3));
  REQUIRE(c.size() == 6);
  CHECK(c[0] == Point2{1.5, 1.5});
  CHECK(c[1] == Point2{2.5, 1.5});
  CHECK(c[2] == Point2{3.5, 1.5});
  CHECK(c[3] == Point2{3.5, 2.5});
  CHECK(c[5] == Point2{1.5, 2.5});
  CHECK(trace_boundary(rect_mask(3, 3, 1, 1, 2, 2)).size() == 1);
  CHECK(trace_boundary(rect_mask(5, 1, 1, 0, 4, 1)).size() == 4);
  CHECK_THROWS(trace_boundary(HardMask(4, 4)));
}

TEST_CASE("boundary tracing picks the largest component") {
  HardMask m = rect_mask(12, 8, 6, 1, 11, 7);
  m.set(1, 1, true);
  m.set(2, 1, true);
  const Contour c = trace_boundary(m);
  for (const Point2& p : c.points) CHECK(p.x > 6.0);
}

TEST_CASE("init signature approximates the target") {
  RenderConfig cfg;
  const Problem p = make_problem(cfg, 1);
  const DctSignature init = init_signature(p.target, p.box, 16, 32, cfg.viewport);
  CHECK(init.coeffs.rows() == 16);
  const Contour c = coord_decode(dct_decode(init), p.box);
  CHECK(mask_iou(fill_in_viewport(c, cfg), p.target) > 0.85);
  const DctSignature short_init = init_signature(p.target, p.box, 16, 4, cfg.viewport);
  CHECK(short_init.coeffs.bottomRows(14).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(init_signature(HardMask(64, 64), p.box, 16, 4));
}

TEST_CASE("renderer runs only on silhouette steps") {
  RenderConfig cfg;
  cfg.width = cfg.height = 32;
  const Problem p = make_problem(cfg, 2);
  FitSchedule s;
  s.render_cfg = cfg;
  s.phase1_steps = 7;
  s.lambda1_decay_steps = 2;
  s.phase2_steps = 5;
  const DctSignature init = init_signature(p.target, p.box, 16, 8, cfg.viewport);
  const FitResult r = fit_contour(p.target, p.box, init, s, p.gt);
  CHECK(r.steps_run == 12);
  CHECK(r.render_calls == 5);
  CHECK(r.loss_trace.size() == 12);
  CHECK(r.iou_trace.size() == 12);
  CHECK_FALSE(r.diverged);
}

TEST_CASE("zero steps return the initial signature") {
  RenderConfig cfg;
  const Problem p = make_problem(cfg, 3);
  FitSchedule s;
  s.phase1_steps = 0;
  s.phase2_steps = 0;
  const FitResult r = fit_contour(p.target, p.box, p.gt, s);
  CHECK(r.steps_run == 0);
  CHECK(r.final_signature.coeffs == p.gt.coeffs);
  CHECK(r.loss_trace.empty());
}

TEST_CASE("fit input validation") {
  RenderConfig cfg;
  const Problem p = make_problem(cfg, 4);
  FitSchedule s;
  CHECK_THROWS(fit_contour(p.target, p.box, p.gt, s));
  s.phase1_steps = 0;
  CHECK_THROWS(fit_contour(HardMask(32, 32), p.box, p.gt, s));
  CHECK_THROWS(fit_contour(p.target, p.box, p.gt, s, DctSignature{Eigen::MatrixX2d::Zero(8, 2)}));
}

TEST_CASE("signature phase pulls toward the ground truth") {
  RenderConfig cfg;
  const Problem p = make_problem(cfg, 5);
  FitSchedule s;
  s.phase1_steps = 100;
  s.phase2_steps = 0;
  s.step_size = 1.0;
  const DctSignature init{Eigen::MatrixX2d::Zero(16, 2)};
  const FitResult r = fit_contour(p.target, p.box, init, s, p.gt);
  CHECK(r.render_calls == 0);
  CHECK(r.loss_trace.back() < 0.1 * r.loss_trace.front());
  CHECK(r.iou_trace.back() > 0.9);
}

TEST_CASE("silhouette phase improves a coarse init") {
  RenderConfig cfg;
  cfg.sigma = cfg.effective_sigma() / 4;
  const Problem p = make_problem(cfg, 6);
  FitSchedule s;
  s.render_cfg = cfg;
  s.phase1_steps = 0;
  s.lambda1_decay_steps = 0;
  s.phase2_steps = 150;
  s.step_size = 0.003;
  const DctSignature init = init_signature(p.target, p.box, 16, 4, cfg.viewport);
  const FitResult r = fit_contour(p.target, p.box, init, s);
  CHECK(r.iou_trace.back() > r.iou_trace.front() + 0.02);
}

TEST_CASE("fits are deterministic and map back into the box frame") {
  RenderConfig cfg;
  cfg.width = cfg.height = 32;
  const Problem p = make_problem(cfg, 7);
  FitSchedule s;
  s.render_cfg = cfg;
  s.phase1_steps = 5;
  s.lambda1_decay_steps = 3;
  s.phase2_steps = 10;
  const DctSignature init = init_signature(p.target, p.box, 16, 8, cfg.viewport);
  const FitResult a = fit_contour(p.target, p.box, init, s, p.gt);
  const FitResult b = fit_contour(p.target, p.box, init, s, p.gt);
  CHECK(a.final_signature.coeffs == b.final_signature.coeffs);
  CHECK(a.loss_trace == b.loss_trace);

  const BBox big{{100, 50}, 40, 20};
  const FitResult c = fit_contour(p.target, big, init, s, p.gt);
  CHECK(c.final_signature.coeffs == a.final_signature.coeffs);
  CHECK(c.final_contour[0].x == doctest::Approx(100 + 40 * a.final_contour[0].x));
  CHECK(c.final_contour[0].y == doctest::Approx(50 + 20 * a.final_contour[0].y));
}

TEST_CASE("non-finite gradients stop the fit") {
  RenderConfig cfg;
  const Problem p = make_problem(cfg, 8);
  FitSchedule s;
  s.phase1_steps = 0;
  s.phase2_steps = 10;
  DctSignature bad = p.gt;
  bad.coeffs(0, 0) = std::nan("");
  const FitResult r = fit_contour(p.target, p.box, bad, s);
  CHECK(r.diverged);
  CHECK(r.steps_run == 0);
}
