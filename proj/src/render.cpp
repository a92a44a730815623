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
#include "contourkit/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "raster_common.hpp"

namespace contourkit {
namespace {

struct EdgeGeom {
  Point2 start;
  Point2 vec;
  double inv_len2 = 0.0;
  double inv_len = 0.0;
  int v_start = 0;
  int v_end = 0;
};

// Face with vertices reordered counter-clockwise.
struct FaceGeom {
  std::array<Point2, 3> p;
  std::array<EdgeGeom, 3> edges;
  bool degenerate = false;
};

std::vector<FaceGeom> prepare_faces(const ContourMesh& mesh) {
  std::vector<FaceGeom> out;
  out.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    std::array<int, 3> idx = f;
    const Point2 a = mesh.vertices[static_cast<std::size_t>(idx[0])];
    const Point2 b = mesh.vertices[static_cast<std::size_t>(idx[1])];
    const Point2 c = mesh.vertices[static_cast<std::size_t>(idx[2])];
    const double orient = cross(b - a, c - a);
    if (orient < 0.0) std::swap(idx[1], idx[2]);
    FaceGeom g;
    for (int k = 0; k < 3; ++k) g.p[k] = mesh.vertices[static_cast<std::size_t>(idx[k])];
    g.degenerate = orient == 0.0;
    for (int k = 0; k < 3; ++k) {
      EdgeGeom& e = g.edges[k];
      e.v_start = idx[k];
      e.v_end = idx[(k + 1) % 3];
      e.start = g.p[k];
      e.vec = g.p[(k + 1) % 3] - g.p[k];
      const double len2 = dot(e.vec, e.vec);
      e.inv_len2 = len2 > 0.0 ? 1.0 / len2 : 0.0;
      e.inv_len = len2 > 0.0 ? 1.0 / std::sqrt(len2) : 0.0;
    }
    out.push_back(g);
  }
  return out;
}

bool face_contains(const FaceGeom& f, Point2 p) {
  return !f.degenerate && detail::inside_ccw(f.p[0], f.p[1], f.p[2], p);
}

// Signed distance plus its derivative with respect to the (at most two)
// vertices of the nearest boundary feature.
struct DistanceEval {
  double d = 0.0;
  int v0 = -1;
  int v1 = -1;
  Point2 g0;
  Point2 g1;
};

enum class Feature { kEdge, kStart, kEnd };

double signed_distance(const FaceGeom& f, Point2 p, int* nearest_edge, Feature* feature,
                       bool* inside) {
  double best = 0.0;
  int best_edge = -1;
  Feature best_feature = Feature::kEdge;
  for (int k = 0; k < 3; ++k) {
    const EdgeGeom& e = f.edges[k];
    const Point2 w = p - e.start;
    double t = dot(w, e.vec) * e.inv_len2;
    Feature feat = Feature::kEdge;
    if (t <= 0.0) {
      t = 0.0;
      feat = Feature::kStart;
    } else if (t >= 1.0) {
      t = 1.0;
      feat = Feature::kEnd;
    }
    const Point2 q = w - t * e.vec;
    const double d2 = dot(q, q);
    if (best_edge < 0 || d2 < best) {
      best = d2;
      best_edge = k;
      best_feature = feat;
    }
  }
  *nearest_edge = best_edge;
  *feature = best_feature;
  const double dist = std::sqrt(best);
  *inside = face_contains(f, p);
  return *inside ? dist : -dist;
}

DistanceEval signed_distance_with_grad(const FaceGeom& f, Point2 p) {
  int k = 0;
  Feature feat = Feature::kEdge;
  bool inside = false;
  DistanceEval out;
  out.d = signed_distance(f, p, &k, &feat, &inside);
  const double side = inside ? 1.0 : -1.0;
  const EdgeGeom& e = f.edges[k];
  if (feat == Feature::kEdge && e.inv_len > 0.0) {
    const Point2 w = p - e.start;
    const Point2 E = e.vec;
    const double il = e.inv_len;
    const double h = cross(E, w) * il;
    const double sgn = side * (h >= 0.0 ? 1.0 : -1.0);
    const Point2 dh_end = il * Point2{w.y, -w.x} - (h * il * il) * E;
    const Point2 dh_start = il * Point2{E.y - w.y, w.x - E.x} + (h * il * il) * E;
    out.v0 = e.v_start;
    out.v1 = e.v_end;
    out.g0 = sgn * dh_start;
    out.g1 = sgn * dh_end;
  } else {
    const bool at_end = feat == Feature::kEnd;
    const Point2 v = at_end ? e.start + e.vec : e.start;
    const Point2 diff = v - p;
    const double dist = std::sqrt(dot(diff, diff));
    out.v0 = at_end ? e.v_end : e.v_start;
    if (dist > 0.0) out.g0 = (side / dist) * diff;
  }
  return out;
}

void check_inputs(const ContourMesh& mesh, const RenderConfig& cfg) {
  cfg.validate();
  if (mesh.faces.empty()) throw std::invalid_argument("render: mesh has no faces");
  const auto nv = static_cast<int>(mesh.vertices.size());
  for (const auto& f : mesh.faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= nv) throw std::invalid_argument("render: face index out of range");
    }
  }
}

}  // namespace

double RenderConfig::effective_sigma() const {
  return sigma > 0.0 ? sigma : (viewport.x1 - viewport.x0) / 64.0;
}

Point2 RenderConfig::pixel_center(int x, int y) const {
  return {viewport.x0 + (x + 0.5) * (viewport.x1 - viewport.x0) / width,
          viewport.y0 + (y + 0.5) * (viewport.y1 - viewport.y0) / height};
}

void RenderConfig::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("RenderConfig: dimensions must be positive");
  if (!(viewport.x1 > viewport.x0) || !(viewport.y1 > viewport.y0)) {
    throw std::invalid_argument("RenderConfig: empty viewport");
  }
  if (!(effective_sigma() > 0.0)) throw std::invalid_argument("RenderConfig: sigma must be positive");
}

SoftMask render(const ContourMesh& mesh, const RenderConfig& cfg) {
  check_inputs(mesh, cfg);
  const std::vector<FaceGeom> faces = prepare_faces(mesh);
  const double inv_sigma = 1.0 / cfg.effective_sigma();
  const bool hard = cfg.mode == RenderMode::kHard;
  SoftMask out(cfg.width, cfg.height);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      const Point2 p = cfg.pixel_center(x, y);
      double value = 0.0;
      if (hard) {
        for (const FaceGeom& f : faces) {
          if (face_contains(f, p)) {
            value = 1.0;
            break;
          }
        }
      } else {
        double empty = 1.0;
        for (const FaceGeom& f : faces) {
          int k = 0;
          Feature feat = Feature::kEdge;
          bool inside = false;
          const double z = signed_distance(f, p, &k, &feat, &inside) * inv_sigma;
          if (z < -kCoverageCutoff) continue;
          empty *= 1.0 - detail::logistic(z);
        }
        value = 1.0 - empty;
      }
      out.values[static_cast<std::size_t>(y) * cfg.width + x] = value;
    }
  }
  return out;
}

VertexGrad render_backward(const ContourMesh& mesh, const RenderConfig& cfg,
                           std::span<const double> upstream) {
  check_inputs(mesh, cfg);
  if (cfg.mode != RenderMode::kSoft) {
    throw std::invalid_argument("render_backward: hard mode is not differentiable");
  }
  if (upstream.size() != static_cast<std::size_t>(cfg.width) * cfg.height) {
    throw std::invalid_argument("render_backward: upstream size does not match the render grid");
  }
  const std::vector<FaceGeom> faces = prepare_faces(mesh);
  const std::size_t nf = faces.size();
  const std::size_t stride = 2 * mesh.vertices.size();
  const double inv_sigma = 1.0 / cfg.effective_sigma();
  std::vector<double> partial(static_cast<std::size_t>(cfg.height) * stride, 0.0);

#pragma omp parallel
  {
    std::vector<DistanceEval> evals(nf);
    std::vector<double> keep(nf);   // 1 - c_j
    std::vector<double> slope(nf);  // dc_j / dd_j
    std::vector<double> suffix(nf + 1);

#pragma omp for schedule(static)
    for (int y = 0; y < cfg.height; ++y) {
      double* row = partial.data() + static_cast<std::size_t>(y) * stride;
      for (int x = 0; x < cfg.width; ++x) {
        const double up = upstream[static_cast<std::size_t>(y) * cfg.width + x];
        if (up == 0.0) continue;
        const Point2 p = cfg.pixel_center(x, y);
        for (std::size_t j = 0; j < nf; ++j) {
          evals[j] = signed_distance_with_grad(faces[j], p);
          const double z = evals[j].d * inv_sigma;
          if (z < -kCoverageCutoff) {
            keep[j] = 1.0;
            slope[j] = 0.0;
            continue;
          }
          const double c = detail::logistic(z);
          keep[j] = 1.0 - c;
          slope[j] = c * (1.0 - c) * inv_sigma;
        }
        suffix[nf] = 1.0;
        for (std::size_t j = nf; j-- > 0;) suffix[j] = suffix[j + 1] * keep[j];
        double prefix = 1.0;
        for (std::size_t j = 0; j < nf; ++j) {
          if (slope[j] != 0.0) {
            const double g = up * prefix * suffix[j + 1] * slope[j];
            const DistanceEval& e = evals[j];
            row[2 * e.v0] += g * e.g0.x;
            row[2 * e.v0 + 1] += g * e.g0.y;
            if (e.v1 >= 0) {
              row[2 * e.v1] += g * e.g1.x;
              row[2 * e.v1 + 1] += g * e.g1.y;
            }
          }
          prefix *= keep[j];
        }
      }
    }
  }

  VertexGrad out;
  out.grads.assign(mesh.vertices.size(), Point2{});
  for (int y = 0; y < cfg.height; ++y) {
    const double* row = partial.data() + static_cast<std::size_t>(y) * stride;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      out.grads[v].x += row[2 * v];
      out.grads[v].y += row[2 * v + 1];
    }
  }
  return out;
}

DctSignature chain_to_signature(const VertexGrad& vg, const ContourMesh& mesh, const BBox& box) {
  if (vg.grads.size() != mesh.vertices.size() || mesh.sources.size() != mesh.vertices.size()) {
    throw std::invalid_argument("chain_to_signature: gradient/mesh length mismatch");
  }
  if (!(box.width > 0.0) || !(box.height > 0.0)) {
    throw std::invalid_argument("chain_to_signature: box size must be strictly positive");
  }
  const auto m = static_cast<Eigen::Index>(mesh.contour_map.size());
  Eigen::MatrixX2d g = Eigen::MatrixX2d::Zero(m, 2);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    for (const PointWeight& term : mesh.sources[v]) {
      if (term.point < 0 || term.point >= m) {
        throw std::invalid_argument("chain_to_signature: vertex source outside the contour map");
      }
      g(term.point, 0) += term.weight * vg.grads[v].x;
      g(term.point, 1) += term.weight * vg.grads[v].y;
    }
  }
  g.col(0) *= box.width;
  g.col(1) *= box.height;
  return {dct_columns(g)};
}

Contour to_pixel_frame(const Contour& c, const RenderConfig& cfg) {
  const Viewport& vp = cfg.viewport;
  const double sx = cfg.width / (vp.x1 - vp.x0);
  const double sy = cfg.height / (vp.y1 - vp.y0);
  Contour out;
  out.points.reserve(c.size());
  for (const Point2& p : c.points) out.points.push_back({(p.x - vp.x0) * sx, (p.y - vp.y0) * sy});
  return out;
}

HardMask fill_in_viewport(const Contour& c, const RenderConfig& cfg) {
  return fill_polygon(to_pixel_frame(c, cfg), cfg.width, cfg.height);
}

HardMask binarize(const SoftMask& m, double threshold) {
  HardMask out(m.width, m.height);
  for (std::size_t i = 0; i < m.values.size(); ++i) out.bits[i] = m.values[i] > threshold ? 1 : 0;
  return out;
}

}  // namespace contourkit
