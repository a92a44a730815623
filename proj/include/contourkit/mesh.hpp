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
#ifndef CONTOURKIT_MESH_HPP_
#define CONTOURKIT_MESH_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "contourkit/geometry.hpp"

namespace contourkit {

// One term of a vertex's linear dependence on the contour points.
struct PointWeight {
  int point = 0;
  double weight = 0.0;
};

/// Flat triangle mesh in the contour plane (every vertex has z = 0).
///
/// `sources[v]` expresses vertex v as a fixed linear combination of
/// contour points; the backward pass uses it to route vertex gradients to
/// the contour. Outer-ring vertices are their own contour point with
/// weight 1.
struct ContourMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> contour_map;
  std::vector<std::vector<PointWeight>> sources;
};

struct InternalLinking {
  double t = 0.1;
};

struct KMeansLinking {
  int k = 4;
  int iterations = 20;
  std::uint64_t seed = 0;
};

struct ShrinkLinking {
  double s = 0.0;
};

using MeshStrategy = std::variant<InternalLinking, KMeansLinking, ShrinkLinking>;

/// Ear-clipping internal linking: walking the remaining ring, each
/// neighbouring pair scans counter-clockwise for the first point whose
/// triangle with the pair has |area| > t, emits that face and drops the
/// points it cut off. Throws std::invalid_argument if no face qualifies.
ContourMesh build_internal(const Contour& c, double t);

/// Pairs every point with its scaled copy s * p. For s = 0 the inner ring
/// collapses to one origin vertex and the mesh is a fan of M faces.
ContourMesh build_external_shrink(const Contour& c, double s);

/// Lloyd's k-means with farthest-first seeding; each boundary edge links to
/// the center(s) of its endpoints.
ContourMesh build_external_kmeans(const Contour& c, int k, int iterations, std::uint64_t seed);

ContourMesh build_mesh(const Contour& c, const MeshStrategy& strategy);

struct KMeansResult {
  std::vector<Point2> centers;
  std::vector<int> assignment;
};

KMeansResult kmeans_points(const std::vector<Point2>& points, int k, int iterations,
                           std::uint64_t seed);

// Throws std::invalid_argument when an index or the contour map is broken.
void validate_mesh(const ContourMesh& mesh);

// "v x y 0" / "f i j k" lines with 1-based indices.
void write_obj(std::ostream& os, const ContourMesh& mesh);

}  // namespace contourkit

#endif  // CONTOURKIT_MESH_HPP_
