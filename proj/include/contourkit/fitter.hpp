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
#ifndef CONTOURKIT_FITTER_HPP_
#define CONTOURKIT_FITTER_HPP_

#include <optional>
#include <vector>

#include "contourkit/geometry.hpp"
#include "contourkit/losses.hpp"
#include "contourkit/mesh.hpp"
#include "contourkit/render.hpp"
#include "contourkit/signatures.hpp"

namespace contourkit {

// Fitting works in the box-normalized frame: the target mask covers
// render_cfg.viewport in normalized units, so the default viewport
// [-0.6, 0.6]^2 leaves a 10% margin around the unit box.
struct FitSchedule {
  int phase1_steps = 100;
  int phase2_steps = 400;
  int lambda1_decay_steps = 50;
  double step_size = 0.05;
  double momentum = 0.9;
  LossKind loss_kind = LossKind::kLovasz;
  MeshStrategy mesh_strategy = ShrinkLinking{0.0};
  RenderConfig render_cfg;

  void validate() const;
  int total_steps() const { return phase1_steps + phase2_steps; }
  // Weights applied at step i (0-based).
  double lambda1(int step) const;
  double lambda2(int step) const;
};

struct FitResult {
  Contour final_contour;  // in the box's coordinate frame
  DctSignature final_signature;
  std::vector<double> loss_trace;
  std::vector<double> iou_trace;
  int steps_run = 0;
  long render_calls = 0;
  bool diverged = false;
};

/// Outer boundary of the largest 8-connected foreground component, found
/// by Moore-neighbour tracing. Points are pixel centers in the mask's
/// pixel frame, in tracing order.
Contour trace_boundary(const HardMask& mask);

/// Coarse starting signature: traces the target boundary, pushes it half
/// a pixel outward so the polygon covers the boundary pixels, maps it
/// through `viewport` (normalized units) and `box`, starts it on the +x
/// axis from the box center, resamples to m points,
/// encodes and truncates to valid_len. Throws std::invalid_argument on an
/// empty target.
DctSignature init_signature(const HardMask& target, const BBox& box, int m, int valid_len,
                            const Viewport& viewport = {});

/// Momentum gradient descent on the DCT coefficients. Phase 1 minimizes
/// the smooth L1 distance to gt_sig; phase 2 adds the silhouette loss of
/// the rendered mesh, while lambda1 decays linearly to 0 over its first
/// lambda1_decay_steps steps. The renderer is only called on steps with
/// lambda2 > 0. A non-finite signature, loss or gradient stops the fit
/// with diverged = true.
FitResult fit_contour(const HardMask& target, const BBox& box, const DctSignature& init,
                      const FitSchedule& sched,
                      const std::optional<DctSignature>& gt_sig = std::nullopt);

}  // namespace contourkit

#endif  // CONTOURKIT_FITTER_HPP_
