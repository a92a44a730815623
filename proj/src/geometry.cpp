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
#include "contourkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace contourkit {

HardMask::HardMask(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("HardMask: dimensions must be positive");
  bits.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t HardMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

SoftMask::SoftMask(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("SoftMask: dimensions must be positive");
  values.assign(static_cast<std::size_t>(w) * h, 0.0);
}

void validate_contour(const Contour& c) {
  if (c.size() < 3) {
    throw std::invalid_argument("contour needs at least 3 points, got " +
                                std::to_string(c.size()));
  }
  for (const Point2& p : c.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("contour has a non-finite coordinate");
    }
  }
}

double signed_area(const Contour& c) {
  const std::size_t n = c.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(c[i], c[(i + 1) % n]);
  }
  return 0.5 * twice;
}

double polygon_area(const Contour& c) { return std::abs(signed_area(c)); }

double perimeter(const Contour& c) {
  const std::size_t n = c.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 d = c[(i + 1) % n] - c[i];
    total += std::hypot(d.x, d.y);
  }
  return total;
}

Contour normalize_orientation(Contour c) {
  if (c.size() >= 3 && signed_area(c) < 0.0) {
    std::reverse(c.points.begin() + 1, c.points.end());
  }
  return c;
}

Contour resample_contour(const Contour& polygon, int m) {
  validate_contour(polygon);
  if (m < 3) throw std::invalid_argument("resample_contour: m must be >= 3");
  const Contour ccw = normalize_orientation(polygon);
  const std::size_t n = ccw.size();

  std::vector<double> seg_len(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 d = ccw[(i + 1) % n] - ccw[i];
    seg_len[i] = std::hypot(d.x, d.y);
  }
  const double total = std::accumulate(seg_len.begin(), seg_len.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("resample_contour: zero perimeter");

  Contour out;
  out.points.reserve(static_cast<std::size_t>(m));
  std::size_t seg = 0;
  double seg_start = 0.0;  // arc length at the start of `seg`
  for (int j = 0; j < m; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(m);
    while (seg + 1 < n && seg_start + seg_len[seg] <= target) {
      seg_start += seg_len[seg];
      ++seg;
    }
    const Point2 a = ccw[seg];
    const Point2 b = ccw[(seg + 1) % n];
    const double t = seg_len[seg] > 0.0 ? (target - seg_start) / seg_len[seg] : 0.0;
    out.points.push_back(a + std::clamp(t, 0.0, 1.0) * (b - a));
  }
  return out;
}

Contour rotate_start_to_axis(const Contour& c, Point2 center) {
  if (c.size() == 0) return c;
  std::size_t best = 0;
  double best_angle = 0.0;
  double best_r2 = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Point2 d = c[i] - center;
    const double angle = std::fabs(std::atan2(d.y, d.x));
    const double r2 = dot(d, d);
    if (i == 0 || angle < best_angle || (angle == best_angle && r2 > best_r2)) {
      best = i;
      best_angle = angle;
      best_r2 = r2;
    }
  }
  Contour out;
  out.points.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out.points.push_back(c[(best + i) % c.size()]);
  return out;
}

Contour convex_hull(const Contour& c) {
  std::vector<Point2> pts = c.points;
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return Contour{pts};

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return Contour{std::move(hull)};
}

double convexity(const Contour& c) {
  validate_contour(c);
  const Contour hull = convex_hull(c);
  const double hull_area = hull.size() >= 3 ? polygon_area(hull) : 0.0;
  if (!(hull_area > 0.0)) throw std::domain_error("convexity: degenerate convex hull");
  return std::min(1.0, polygon_area(c) / hull_area);
}

HardMask fill_polygon(const Contour& c, int width, int height) {
  HardMask mask(width, height);
  const std::size_t n = c.size();
  if (n < 3) return mask;
  for (const Point2& p : c.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return mask;
  }

  // Crossing abscissae per scanline. An edge crosses row y when its
  // endpoints straddle yc = y + 0.5 under the half-open rule.
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(height));
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 pi = c[i];
    const Point2 pj = c[j];
    const double lo = std::min(pi.y, pj.y);
    const double hi = std::max(pi.y, pj.y);
    if (!(hi > lo)) continue;
    const double h = static_cast<double>(height);
    const int y_begin = std::max(0, static_cast<int>(std::floor(std::clamp(lo - 0.5, -1.0, h))) - 1);
    const int y_end = std::min(height, static_cast<int>(std::ceil(std::clamp(hi, -1.0, h))) + 1);
    for (int y = y_begin; y < y_end; ++y) {
      const double yc = y + 0.5;
      if ((pi.y > yc) != (pj.y > yc)) {
        rows[static_cast<std::size_t>(y)].push_back((pj.x - pi.x) * (yc - pi.y) / (pj.y - pi.y) +
                                                    pi.x);
      }
    }
  }

  for (int y = 0; y < height; ++y) {
    auto& xs = rows[static_cast<std::size_t>(y)];
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const double x0 = xs[k];
      const double x1 = xs[k + 1];
      // Pixels with x0 <= px + 0.5 < x1.
      int px = static_cast<int>(std::clamp(std::ceil(x0 - 0.5), 0.0, static_cast<double>(width)));
      while (px > 0 && (px - 1) + 0.5 >= x0) --px;
      while (px < width && px + 0.5 < x0) ++px;
      for (; px < width && px + 0.5 < x1; ++px) mask.set(px, y, true);
    }
  }
  return mask;
}

double mask_iou(const HardMask& a, const HardMask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw std::invalid_argument("mask_iou: dimension mismatch");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    inter += (a.bits[i] & b.bits[i]);
    uni += (a.bits[i] | b.bits[i]);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Contour merge_fragments(const std::vector<Contour>& parts) {
  if (parts.empty()) throw std::invalid_argument("merge_fragments: no fragments");
  if (parts.size() == 1) return parts.front();

  std::vector<std::size_t> order(parts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> areas(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) areas[i] = polygon_area(parts[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return areas[a] > areas[b]; });

  Contour merged;
  for (std::size_t idx : order) {
    const Contour ccw = normalize_orientation(parts[idx]);
    merged.points.insert(merged.points.end(), ccw.points.begin(), ccw.points.end());
  }
  return merged;
}

BBox bbox_of(const Contour& c) {
  if (c.size() == 0) throw std::invalid_argument("bbox_of: empty contour");
  double x0 = c[0].x, x1 = c[0].x, y0 = c[0].y, y1 = c[0].y;
  for (const Point2& p : c.points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("bbox_of: zero-extent contour");
  return BBox{{0.5 * (x0 + x1), 0.5 * (y0 + y1)}, x1 - x0, y1 - y0};
}

bool is_star_shaped_about(const Contour& c, Point2 center) {
  const std::size_t n = c.size();
  if (n < 3) return false;
  double winding = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = c[i] - center;
    const Point2 b = c[(i + 1) % n] - center;
    const double cr = cross(a, b);
    if (!(cr > 0.0)) return false;
    winding += std::atan2(cr, dot(a, b));
  }
  return std::abs(winding - 2.0 * std::numbers::pi) < 1e-9;
}

}  // namespace contourkit
