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
// Serial baseline for the renderer. Distances come from the nearest
// boundary point directly and vertex derivatives use the envelope form
// d|p - q(t*)|/dA = (1 - t*) (q - p) / |p - q|, so this file shares no
// arithmetic with the parallel kernels beyond the inside predicate.
#include <array>
#include <cmath>
#include <stdexcept>

#include "contourkit/render.hpp"
#include "raster_common.hpp"

namespace contourkit::reference {
namespace {

struct Nearest {
  double dist = 0.0;
  double t = 0.0;  // parameter along the edge of the nearest point
  Point2 q;
  int edge = 0;
};

struct Triangle {
  std::array<Point2, 3> p;
  std::array<int, 3> idx;
  bool degenerate = false;
};

Triangle ccw_triangle(const ContourMesh& mesh, const std::array<int, 3>& f) {
  Triangle t;
  t.idx = f;
  const Point2 a = mesh.vertices[static_cast<std::size_t>(f[0])];
  const Point2 b = mesh.vertices[static_cast<std::size_t>(f[1])];
  const Point2 c = mesh.vertices[static_cast<std::size_t>(f[2])];
  const double orient = cross(b - a, c - a);
  if (orient < 0.0) std::swap(t.idx[1], t.idx[2]);
  for (int k = 0; k < 3; ++k) t.p[k] = mesh.vertices[static_cast<std::size_t>(t.idx[k])];
  t.degenerate = orient == 0.0;
  return t;
}

Nearest nearest_on_boundary(const Triangle& tri, Point2 p) {
  Nearest best;
  bool first = true;
  for (int k = 0; k < 3; ++k) {
    const Point2 a = tri.p[k];
    const Point2 b = tri.p[(k + 1) % 3];
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::fmin(1.0, std::fmax(0.0, t));
    const Point2 q = a + t * ab;
    const double dist = std::hypot(p.x - q.x, p.y - q.y);
    if (first || dist < best.dist) {
      best = {dist, t, q, k};
      first = false;
    }
  }
  return best;
}

bool contains(const Triangle& tri, Point2 p) {
  return !tri.degenerate && detail::inside_ccw(tri.p[0], tri.p[1], tri.p[2], p);
}

double coverage(double d, double sigma) {
  const double z = d / sigma;
  if (z < -kCoverageCutoff) return 0.0;
  return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace

SoftMask render(const ContourMesh& mesh, const RenderConfig& cfg) {
  cfg.validate();
  if (mesh.faces.empty()) throw std::invalid_argument("render: mesh has no faces");
  const double sigma = cfg.effective_sigma();
  SoftMask out(cfg.width, cfg.height);
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      const Point2 p = cfg.pixel_center(x, y);
      double empty = 1.0;
      for (const auto& f : mesh.faces) {
        const Triangle tri = ccw_triangle(mesh, f);
        const bool in = contains(tri, p);
        if (cfg.mode == RenderMode::kHard) {
          if (in) empty = 0.0;
          continue;
        }
        const double dist = nearest_on_boundary(tri, p).dist;
        empty *= 1.0 - coverage(in ? dist : -dist, sigma);
      }
      out.values[static_cast<std::size_t>(y) * cfg.width + x] = 1.0 - empty;
    }
  }
  return out;
}

VertexGrad render_backward(const ContourMesh& mesh, const RenderConfig& cfg,
                           std::span<const double> upstream) {
  cfg.validate();
  if (cfg.mode != RenderMode::kSoft) {
    throw std::invalid_argument("render_backward: hard mode is not differentiable");
  }
  if (mesh.faces.empty()) throw std::invalid_argument("render: mesh has no faces");
  if (upstream.size() != static_cast<std::size_t>(cfg.width) * cfg.height) {
    throw std::invalid_argument("render_backward: upstream size does not match the render grid");
  }
  const double sigma = cfg.effective_sigma();
  const std::size_t nf = mesh.faces.size();
  VertexGrad out;
  out.grads.assign(mesh.vertices.size(), Point2{});

  std::vector<double> cov(nf);
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      const double up = upstream[static_cast<std::size_t>(y) * cfg.width + x];
      if (up == 0.0) continue;
      const Point2 p = cfg.pixel_center(x, y);
      for (std::size_t j = 0; j < nf; ++j) {
        const Triangle tri = ccw_triangle(mesh, mesh.faces[j]);
        const double dist = nearest_on_boundary(tri, p).dist;
        cov[j] = coverage(contains(tri, p) ? dist : -dist, sigma);
      }
      for (std::size_t j = 0; j < nf; ++j) {
        if (cov[j] == 0.0) continue;
        double others = 1.0;
        for (std::size_t k = 0; k < nf; ++k) {
          if (k != j) others *= 1.0 - cov[k];
        }
        const double dcov = cov[j] * (1.0 - cov[j]) / sigma;
        if (dcov == 0.0) continue;
        const Triangle tri = ccw_triangle(mesh, mesh.faces[j]);
        const Nearest n = nearest_on_boundary(tri, p);
        if (!(n.dist > 0.0)) continue;
        const double side = contains(tri, p) ? 1.0 : -1.0;
        // d = side * |p - q|; moving the edge endpoints moves q.
        const Point2 unit = (1.0 / n.dist) * (n.q - p);
        const double g = up * others * dcov * side;
        const int va = tri.idx[n.edge];
        const int vb = tri.idx[(n.edge + 1) % 3];
        out.grads[static_cast<std::size_t>(va)] =
            out.grads[static_cast<std::size_t>(va)] + (g * (1.0 - n.t)) * unit;
        out.grads[static_cast<std::size_t>(vb)] =
            out.grads[static_cast<std::size_t>(vb)] + (g * n.t) * unit;
      }
    }
  }
  return out;
}

}  // namespace contourkit::reference
