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
#ifndef CONTOURKIT_RENDER_HPP_
#define CONTOURKIT_RENDER_HPP_

#include <span>
#include <vector>

#include "contourkit/geometry.hpp"
#include "contourkit/mesh.hpp"
#include "contourkit/signatures.hpp"

namespace contourkit {

// Axis-aligned window of the contour plane mapped onto the pixel grid.
struct Viewport {
  double x0 = -0.6;
  double y0 = -0.6;
  double x1 = 0.6;
  double y1 = 0.6;
};

enum class RenderMode { kSoft, kHard };

struct RenderConfig {
  int width = 64;
  int height = 64;
  Viewport viewport;
  // Logistic sharpness in contour units; <= 0 selects 1/64 of the
  // viewport width.
  double sigma = 0.0;
  RenderMode mode = RenderMode::kSoft;

  double effective_sigma() const;
  // Center of pixel (x, y) in contour coordinates.
  Point2 pixel_center(int x, int y) const;
  void validate() const;
};

// d(loss)/d(vertex) for every mesh vertex.
struct VertexGrad {
  std::vector<Point2> grads;
};

/// Soft silhouette: each face contributes logistic(d / sigma), where d is
/// the signed distance from the pixel center to the face boundary
/// (positive inside), and faces combine by probabilistic union
/// 1 - prod(1 - c). Hard mode uses the closed-triangle indicator.
///
/// Rows are evaluated in parallel with OpenMP; every pixel is independent
/// so the output does not depend on the thread count.
SoftMask render(const ContourMesh& mesh, const RenderConfig& cfg);

/// Analytic vertex gradient of sum_p upstream[p] * render(mesh)[p].
/// `upstream` is row-major with cfg.width * cfg.height entries. Per-row
/// partial sums are reduced in row order, so results are bit-identical
/// for any thread count. Soft mode only. Zero-area faces have no
/// derivative; ties between their coincident edges are broken by edge
/// order.
VertexGrad render_backward(const ContourMesh& mesh, const RenderConfig& cfg,
                           std::span<const double> upstream);

/// Routes vertex gradients to the contour points through the mesh's
/// vertex sources, scales by the box size (inverse of coord_decode) and
/// applies the transpose of the inverse DCT.
DctSignature chain_to_signature(const VertexGrad& vg, const ContourMesh& mesh, const BBox& box);

// Maps contour-plane coordinates into the pixel frame of `cfg`.
Contour to_pixel_frame(const Contour& c, const RenderConfig& cfg);

// fill_polygon of a contour given in contour-plane coordinates.
HardMask fill_in_viewport(const Contour& c, const RenderConfig& cfg);

// Pixels with value > threshold.
HardMask binarize(const SoftMask& m, double threshold = 0.5);

// Coverage below logistic(-kCoverageCutoff) is dropped; 1 - c rounds to
// exactly 1.0 there, so the forward pass is unaffected.
inline constexpr double kCoverageCutoff = 40.0;

namespace reference {

// Single-threaded per-pixel loops without precomputed face data; kept as
// the baseline for the parallel kernels.
SoftMask render(const ContourMesh& mesh, const RenderConfig& cfg);
VertexGrad render_backward(const ContourMesh& mesh, const RenderConfig& cfg,
                           std::span<const double> upstream);

}  // namespace reference

}  // namespace contourkit

#endif  // CONTOURKIT_RENDER_HPP_
