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
#ifndef CONTOURKIT_GEOMETRY_HPP_
#define CONTOURKIT_GEOMETRY_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace contourkit {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

// A closed polygon; the last point implicitly connects back to the first.
struct Contour {
  std::vector<Point2> points;

  std::size_t size() const { return points.size(); }
  const Point2& operator[](std::size_t i) const { return points[i]; }
  Point2& operator[](std::size_t i) { return points[i]; }
};

// Axis-aligned box in center/size form.
struct BBox {
  Point2 center;
  double width = 1.0;
  double height = 1.0;
};

// Row-major W x H binary grid; pixel (x, y) covers [x, x+1) x [y, y+1).
struct HardMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  HardMask() = default;
  HardMask(int w, int h);

  std::uint8_t at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, bool on) {
    bits[static_cast<std::size_t>(y) * width + x] = on ? 1 : 0;
  }
  std::size_t count() const;
};

// Row-major W x H grid of coverage values in [0, 1].
struct SoftMask {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  SoftMask() = default;
  SoftMask(int w, int h);

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

// Throws std::invalid_argument if c has fewer than 3 points or a
// non-finite coordinate.
void validate_contour(const Contour& c);

// Shoelace area, positive for counter-clockwise winding (x right, y up).
double signed_area(const Contour& c);
double polygon_area(const Contour& c);
double perimeter(const Contour& c);

// Reverses clockwise contours while keeping the first vertex in place.
Contour normalize_orientation(Contour c);

/// Resamples the closed boundary to `m` points at uniform arc-length
/// spacing. Output is counter-clockwise and starts at the first input
/// vertex. Throws on zero perimeter or m < 3.
Contour resample_contour(const Contour& polygon, int m);

/// Cyclic shift so that the first point is the vertex whose direction from
/// `center` is closest to the +x axis (ties: the farther vertex). Gives
/// contours traced from different starts a common parameterization.
Contour rotate_start_to_axis(const Contour& c, Point2 center);

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
Contour convex_hull(const Contour& c);

/// Area of the polygon over the area of its convex hull, in (0, 1].
/// Throws std::domain_error when the hull has zero area.
double convexity(const Contour& c);

/// Even-odd scanline fill in pixel coordinates. A pixel is set iff its
/// center (x + 0.5, y + 0.5) lies inside the polygon.
HardMask fill_polygon(const Contour& c, int width, int height);

/// |a & b| / |a | b|, or 1.0 when both masks are empty.
double mask_iou(const HardMask& a, const HardMask& b);

/// Stacks fragments into one contour: descending area, each fragment
/// counter-clockwise.
Contour merge_fragments(const std::vector<Contour>& parts);

// Tight box; throws std::invalid_argument on zero width or height.
BBox bbox_of(const Contour& c);

// True when every fan triangle (center, p_i, p_{i+1}) winds
// counter-clockwise and the fan closes exactly once around `center`.
bool is_star_shaped_about(const Contour& c, Point2 center);

}  // namespace contourkit

#endif  // CONTOURKIT_GEOMETRY_HPP_
