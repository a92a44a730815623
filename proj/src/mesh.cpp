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
#include "contourkit/mesh.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace contourkit {
namespace {

ContourMesh outer_ring(const Contour& c) {
  ContourMesh mesh;
  const int m = static_cast<int>(c.size());
  mesh.vertices = c.points;
  mesh.contour_map.resize(static_cast<std::size_t>(m));
  mesh.sources.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    mesh.contour_map[static_cast<std::size_t>(i)] = i;
    mesh.sources[static_cast<std::size_t>(i)] = {{i, 1.0}};
  }
  return mesh;
}

double dist2(Point2 a, Point2 b) {
  const Point2 d = a - b;
  return dot(d, d);
}

}  // namespace

ContourMesh build_internal(const Contour& c, double t) {
  validate_contour(c);
  if (!(t > 0.0)) throw std::invalid_argument("build_internal: t must be positive");
  const int m = static_cast<int>(c.size());
  ContourMesh mesh = outer_ring(c);

  std::vector<int> next(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) next[static_cast<std::size_t>(i)] = (i + 1) % m;
  auto nx = [&](int i) { return next[static_cast<std::size_t>(i)]; };

  int alive = m;
  int cur = 0;
  int misses = 0;
  while (alive >= 3 && misses < alive) {
    const int a = cur;
    const int b = nx(a);
    const Point2 edge = c[static_cast<std::size_t>(b)] - c[static_cast<std::size_t>(a)];
    int found = -1;
    for (int k = nx(b); k != a; k = nx(k)) {
      const double area =
          0.5 * std::abs(cross(edge, c[static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(a)]));
      if (area > t) {
        found = k;
        break;
      }
    }
    if (found < 0) {
      ++misses;
      cur = b;
      continue;
    }
    mesh.faces.push_back({a, b, found});
    // Points strictly between a and the found vertex leave the ring.
    for (int r = b; r != found; r = nx(r)) --alive;
    next[static_cast<std::size_t>(a)] = found;
    misses = 0;
    cur = found;
  }

  if (mesh.faces.empty()) {
    throw std::invalid_argument("build_internal: no triangle exceeds area threshold t");
  }
  return mesh;
}

ContourMesh build_external_shrink(const Contour& c, double s) {
  validate_contour(c);
  if (!(s >= 0.0) || !(s < 1.0)) {
    throw std::invalid_argument("build_external_shrink: s must lie in [0, 1)");
  }
  const int m = static_cast<int>(c.size());
  ContourMesh mesh = outer_ring(c);
  if (s == 0.0) {
    mesh.vertices.push_back({0.0, 0.0});
    mesh.sources.emplace_back();
    for (int i = 0; i < m; ++i) mesh.faces.push_back({i, (i + 1) % m, m});
    return mesh;
  }
  for (int i = 0; i < m; ++i) {
    mesh.vertices.push_back(s * c[static_cast<std::size_t>(i)]);
    mesh.sources.push_back({{i, s}});
  }
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    mesh.faces.push_back({i, j, m + j});
    mesh.faces.push_back({i, m + j, m + i});
  }
  return mesh;
}

KMeansResult kmeans_points(const std::vector<Point2>& points, int k, int iterations,
                           std::uint64_t seed) {
  const int n = static_cast<int>(points.size());
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n) throw std::invalid_argument("kmeans: k exceeds point count");
  if (iterations < 0) throw std::invalid_argument("kmeans: negative iteration count");

  KMeansResult out;
  out.centers.push_back(points[static_cast<std::size_t>(seed % static_cast<std::uint64_t>(n))]);
  std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  while (static_cast<int>(out.centers.size()) < k) {
    int far = 0;
    double far_d = -1.0;
    for (int i = 0; i < n; ++i) {
      auto& d = nearest[static_cast<std::size_t>(i)];
      d = std::min(d, dist2(points[static_cast<std::size_t>(i)], out.centers.back()));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    out.centers.push_back(points[static_cast<std::size_t>(far)]);
  }

  auto assign = [&](std::vector<int>& labels) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist2(points[static_cast<std::size_t>(i)], out.centers[0]);
      for (int j = 1; j < k; ++j) {
        const double d = dist2(points[static_cast<std::size_t>(i)], out.centers[static_cast<std::size_t>(j)]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) changed = true;
      labels[static_cast<std::size_t>(i)] = best;
    }
    return changed;
  };
  auto update = [&](const std::vector<int>& labels) {
    std::vector<Point2> sums(static_cast<std::size_t>(k));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      const auto l = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
      sums[l] = sums[l] + points[static_cast<std::size_t>(i)];
      ++counts[l];
    }
    for (std::size_t j = 0; j < sums.size(); ++j) {
      if (counts[j] > 0) out.centers[j] = (1.0 / counts[j]) * sums[j];
    }
  };

  out.assignment.assign(static_cast<std::size_t>(n), -1);
  assign(out.assignment);
  for (int it = 0; it < iterations; ++it) {
    update(out.assignment);
    if (!assign(out.assignment)) break;
  }
  // Centers are exact means of the returned assignment.
  update(out.assignment);
  return out;
}

ContourMesh build_external_kmeans(const Contour& c, int k, int iterations, std::uint64_t seed) {
  validate_contour(c);
  const int m = static_cast<int>(c.size());
  if (k > m) throw std::invalid_argument("build_external_kmeans: k exceeds point count");
  const KMeansResult km = kmeans_points(c.points, k, iterations, seed);

  ContourMesh mesh = outer_ring(c);
  std::vector<std::vector<PointWeight>> members(static_cast<std::size_t>(k));
  for (int i = 0; i < m; ++i) {
    members[static_cast<std::size_t>(km.assignment[static_cast<std::size_t>(i)])].push_back({i, 0.0});
  }
  for (int j = 0; j < k; ++j) {
    auto& terms = members[static_cast<std::size_t>(j)];
    for (auto& term : terms) term.weight = 1.0 / static_cast<double>(terms.size());
    mesh.vertices.push_back(km.centers[static_cast<std::size_t>(j)]);
    mesh.sources.push_back(terms);
  }
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    const int ca = km.assignment[static_cast<std::size_t>(i)];
    const int cb = km.assignment[static_cast<std::size_t>(j)];
    mesh.faces.push_back({i, j, m + ca});
    if (cb != ca) mesh.faces.push_back({i, j, m + cb});
  }
  return mesh;
}

ContourMesh build_mesh(const Contour& c, const MeshStrategy& strategy) {
  return std::visit(
      [&](const auto& s) -> ContourMesh {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, InternalLinking>) {
          return build_internal(c, s.t);
        } else if constexpr (std::is_same_v<T, KMeansLinking>) {
          return build_external_kmeans(c, s.k, s.iterations, s.seed);
        } else {
          return build_external_shrink(c, s.s);
        }
      },
      strategy);
}

void validate_mesh(const ContourMesh& mesh) {
  const auto nv = static_cast<int>(mesh.vertices.size());
  if (mesh.sources.size() != mesh.vertices.size()) {
    throw std::invalid_argument("mesh: sources/vertices length mismatch");
  }
  for (const auto& f : mesh.faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= nv) throw std::invalid_argument("mesh: face index out of range");
    }
  }
  const auto m = static_cast<int>(mesh.contour_map.size());
  std::vector<bool> seen(mesh.vertices.size(), false);
  for (int v : mesh.contour_map) {
    if (v < 0 || v >= nv) throw std::invalid_argument("mesh: contour_map index out of range");
    if (seen[static_cast<std::size_t>(v)]) throw std::invalid_argument("mesh: contour_map not injective");
    seen[static_cast<std::size_t>(v)] = true;
  }
  for (const auto& terms : mesh.sources) {
    for (const auto& term : terms) {
      if (term.point < 0 || term.point >= m) {
        throw std::invalid_argument("mesh: vertex source refers to a missing contour point");
      }
    }
  }
}

void write_obj(std::ostream& os, const ContourMesh& mesh) {
  os.precision(17);
  for (const Point2& v : mesh.vertices) os << "v " << v.x << ' ' << v.y << " 0\n";
  for (const auto& f : mesh.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace contourkit
