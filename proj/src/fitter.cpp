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
#include "contourkit/fitter.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace contourkit {
namespace {

// Clockwise in the pixel frame (y pointing down), starting west.
constexpr std::array<std::array<int, 2>, 8> kDirs = {{
    {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1},
}};

int dir_index(int dx, int dy) {
  for (int i = 0; i < 8; ++i) {
    if (kDirs[i][0] == dx && kDirs[i][1] == dy) return i;
  }
  return -1;
}

// Component labels (8-connected); returns the label of the largest
// component, first in raster order on ties, or -1 for an empty mask.
int largest_component(const HardMask& mask, std::vector<int>& labels) {
  const int w = mask.width;
  const int h = mask.height;
  labels.assign(mask.bits.size(), -1);
  std::vector<int> stack;
  int best = -1;
  std::size_t best_size = 0;
  int next_label = 0;
  for (int start = 0; start < w * h; ++start) {
    if (!mask.bits[static_cast<std::size_t>(start)] || labels[static_cast<std::size_t>(start)] >= 0) {
      continue;
    }
    const int label = next_label++;
    std::size_t size = 0;
    stack.push_back(start);
    labels[static_cast<std::size_t>(start)] = label;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      ++size;
      const int cx = cur % w;
      const int cy = cur / w;
      for (const auto& d : kDirs) {
        const int nx = cx + d[0];
        const int ny = cy + d[1];
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const int n = ny * w + nx;
        if (mask.bits[static_cast<std::size_t>(n)] && labels[static_cast<std::size_t>(n)] < 0) {
          labels[static_cast<std::size_t>(n)] = label;
          stack.push_back(n);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best = label;
    }
  }
  return best;
}

Contour offset_outward(const Contour& c, double amount) {
  const std::size_t n = c.size();
  if (n < 3) {
    // Isolated pixel or two-pixel sliver: use the pixel squares' box.
    double x0 = c[0].x, x1 = c[0].x, y0 = c[0].y, y1 = c[0].y;
    for (const Point2& p : c.points) {
      x0 = std::fmin(x0, p.x);
      x1 = std::fmax(x1, p.x);
      y0 = std::fmin(y0, p.y);
      y1 = std::fmax(y1, p.y);
    }
    return Contour{{{x0 - amount, y0 - amount}, {x1 + amount, y0 - amount},
                    {x1 + amount, y1 + amount}, {x0 - amount, y1 + amount}}};
  }
  const double orient = signed_area(c) >= 0.0 ? 1.0 : -1.0;
  Contour out;
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 prev = c[(i + n - 1) % n];
    const Point2 next = c[(i + 1) % n];
    const Point2 t = next - prev;
    Point2 normal{orient * t.y, -orient * t.x};
    // A spike tip: the trace came back the way it went.
    if (t.x == 0.0 && t.y == 0.0) normal = c[i] - prev;
    const double len = std::hypot(normal.x, normal.y);
    out.points.push_back(len > 0.0 ? c[i] + (amount / len) * normal : c[i]);
  }
  return out;
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

void FitSchedule::validate() const {
  if (phase1_steps < 0 || phase2_steps < 0 || lambda1_decay_steps < 0) {
    throw std::invalid_argument("FitSchedule: step counts must be non-negative");
  }
  if (!(step_size > 0.0)) throw std::invalid_argument("FitSchedule: step_size must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw std::invalid_argument("FitSchedule: momentum must lie in [0, 1)");
  }
  render_cfg.validate();
}

double FitSchedule::lambda1(int step) const {
  if (step < phase1_steps) return 1.0;
  const int j = step - phase1_steps;
  if (j < lambda1_decay_steps) return 1.0 - static_cast<double>(j) / lambda1_decay_steps;
  return 0.0;
}

double FitSchedule::lambda2(int step) const { return step < phase1_steps ? 0.0 : 1.0; }

Contour trace_boundary(const HardMask& mask) {
  std::vector<int> labels;
  const int label = largest_component(mask, labels);
  if (label < 0) throw std::invalid_argument("trace_boundary: mask is empty");
  const int w = mask.width;
  const int h = mask.height;
  auto inside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h &&
           labels[static_cast<std::size_t>(y) * w + x] == label;
  };

  int sx = 0;
  int sy = 0;
  for (int i = 0; i < w * h; ++i) {
    if (labels[static_cast<std::size_t>(i)] == label) {
      sx = i % w;
      sy = i / w;
      break;
    }
  }

  Contour out;
  int cx = sx;
  int cy = sy;
  int back = 0;  // west of the raster-first pixel is background
  int first_move = -1;
  const std::size_t cap = 4 * mask.bits.size() + 8;
  while (out.size() < cap) {
    int found = -1;
    for (int i = 1; i <= 8; ++i) {
      const int d = (back + i) % 8;
      if (inside(cx + kDirs[d][0], cy + kDirs[d][1])) {
        found = d;
        break;
      }
    }
    // Leaving the start pixel the same way again closes the loop.
    if (first_move >= 0 && cx == sx && cy == sy && found == first_move) break;
    out.points.push_back({cx + 0.5, cy + 0.5});
    if (found < 0) break;  // isolated pixel
    if (first_move < 0) first_move = found;
    const int prev = (found + 7) % 8;
    back = dir_index(kDirs[prev][0] - kDirs[found][0], kDirs[prev][1] - kDirs[found][1]);
    cx += kDirs[found][0];
    cy += kDirs[found][1];
  }
  return out;
}

DctSignature init_signature(const HardMask& target, const BBox& box, int m, int valid_len,
                            const Viewport& viewport) {
  if (target.count() == 0) throw std::invalid_argument("init_signature: target is empty");
  const Contour traced = offset_outward(trace_boundary(target), 0.5);
  const double sx = (viewport.x1 - viewport.x0) / target.width;
  const double sy = (viewport.y1 - viewport.y0) / target.height;
  Contour world;
  world.points.reserve(traced.size());
  for (const Point2& p : traced.points) {
    const Point2 n{viewport.x0 + p.x * sx, viewport.y0 + p.y * sy};
    world.points.push_back({box.center.x + n.x * box.width, box.center.y + n.y * box.height});
  }
  const Contour resampled =
      resample_contour(rotate_start_to_axis(normalize_orientation(world), box.center), m);
  return truncate_signature(dct_encode(coord_encode(resampled, box)), valid_len);
}

FitResult fit_contour(const HardMask& target, const BBox& box, const DctSignature& init,
                      const FitSchedule& sched, const std::optional<DctSignature>& gt_sig) {
  sched.validate();
  const RenderConfig& cfg = sched.render_cfg;
  if (target.width != cfg.width || target.height != cfg.height) {
    throw std::invalid_argument("fit_contour: target dimensions differ from the render grid");
  }
  if (sched.phase1_steps > 0 && !gt_sig) {
    throw std::invalid_argument("fit_contour: phase 1 needs a ground-truth signature");
  }
  if (gt_sig && gt_sig->coeffs.rows() != init.coeffs.rows()) {
    throw std::invalid_argument("fit_contour: signature lengths differ");
  }

  const BBox unit{{0.0, 0.0}, 1.0, 1.0};
  auto normalized_contour = [&](const Eigen::MatrixX2d& coeffs) {
    return coord_decode(dct_decode(DctSignature{coeffs}), unit);
  };

  FitResult result;
  Eigen::MatrixX2d sig = init.coeffs;
  Eigen::MatrixX2d velocity = Eigen::MatrixX2d::Zero(sig.rows(), 2);
  const int total = sched.total_steps();
  result.loss_trace.reserve(static_cast<std::size_t>(total));
  result.iou_trace.reserve(static_cast<std::size_t>(total));

  for (int step = 0; step < total; ++step) {
    const double l1 = gt_sig ? sched.lambda1(step) : 0.0;
    const double l2 = sched.lambda2(step);
    if (!all_finite(sig)) {
      result.diverged = true;
      break;
    }
    const Contour contour = normalized_contour(sig);
    double loss = 0.0;
    Eigen::MatrixX2d grad = Eigen::MatrixX2d::Zero(sig.rows(), 2);
    if (l1 > 0.0) {
      const SignatureLoss sl = smooth_l1_loss(DctSignature{sig}, *gt_sig);
      loss += l1 * sl.value;
      grad += l1 * sl.grad;
    }
    if (l2 > 0.0) {
      const ContourMesh mesh = build_mesh(contour, sched.mesh_strategy);
      const SoftMask soft = render(mesh, cfg);
      ++result.render_calls;
      const PixelLoss pl = pixel_loss(sched.loss_kind, soft, target);
      const VertexGrad vg = render_backward(mesh, cfg, pl.grad);
      loss += l2 * pl.value;
      grad += l2 * chain_to_signature(vg, mesh, unit).coeffs;
    }
    result.loss_trace.push_back(loss);
    result.iou_trace.push_back(mask_iou(fill_in_viewport(contour, cfg), target));
    result.steps_run = step + 1;
    if (!std::isfinite(loss) || !all_finite(grad)) {
      result.diverged = true;
      break;
    }
    velocity = sched.momentum * velocity - sched.step_size * grad;
    sig += velocity;
  }

  result.final_signature = DctSignature{sig};
  result.final_contour = coord_decode(dct_decode(result.final_signature), box);
  return result;
}

}  // namespace contourkit
