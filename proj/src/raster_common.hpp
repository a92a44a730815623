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
#ifndef CONTOURKIT_SRC_RASTER_COMMON_HPP_
#define CONTOURKIT_SRC_RASTER_COMMON_HPP_

#include <cmath>

#include "contourkit/geometry.hpp"

namespace contourkit::detail {

inline bool lex_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Orientation of p against the directed edge from -> to, evaluated with
// the endpoints in lexicographic order so that the two triangles sharing
// an edge see exactly negated values.
inline double edge_side(Point2 from, Point2 to, Point2 p) {
  if (lex_less(from, to)) return cross(to - from, p - from);
  return -cross(from - to, p - to);
}

// Closed-triangle membership for a counter-clockwise triangle.
inline bool inside_ccw(Point2 a, Point2 b, Point2 c, Point2 p) {
  return edge_side(a, b, p) >= 0.0 && edge_side(b, c, p) >= 0.0 && edge_side(c, a, p) >= 0.0;
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace contourkit::detail

#endif  // CONTOURKIT_SRC_RASTER_COMMON_HPP_
