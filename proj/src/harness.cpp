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
#include "contourkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <set>
#include <stdexcept>

namespace contourkit {
namespace {

// Runs fn(i) for every shape in parallel; results land at their own index
// so aggregation order never depends on scheduling. The first exception
// by index is rethrown.
template <class Fn>
auto map_shapes(std::size_t n, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = fn(idx);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void require_nonempty(const ShapeCorpus& corpus) {
  if (corpus.empty()) throw std::invalid_argument("analysis: corpus is empty");
}

// Box-normalized points as a contour (signature values read as points).
Contour as_contour(const Eigen::MatrixX2d& values) {
  Contour c;
  c.points.reserve(static_cast<std::size_t>(values.rows()));
  for (Eigen::Index r = 0; r < values.rows(); ++r) c.points.push_back({values(r, 0), values(r, 1)});
  return c;
}

Eigen::MatrixX2d as_matrix(const Contour& c) {
  Eigen::MatrixX2d m(static_cast<Eigen::Index>(c.size()), 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = c[i].x;
    m(static_cast<Eigen::Index>(i), 1) = c[i].y;
  }
  return m;
}

struct Prepared {
  BBox box;
  HardMask gt;
  CoordSignature coord;
};

Prepared prepare(const ShapeEntry& e, int m) {
  Prepared p;
  p.box = entry_box(e);
  p.gt = entry_mask(e);
  p.coord = coord_encode(resample_contour(e.contour, m), p.box);
  return p;
}

double iou_of(const Eigen::MatrixX2d& normalized, const Prepared& p, const ShapeEntry& e) {
  const Contour native = coord_decode(CoordSignature{normalized}, p.box);
  return mask_iou(fill_polygon(native, e.width, e.height), p.gt);
}

void check_dict(const Dictionary& dict, int m) {
  if (dict.atom_length() != 2 * m) {
    throw std::invalid_argument("analysis: dictionary atom length does not match 2m");
  }
}

bool needs_dict(const std::vector<SignatureKind>& kinds) {
  return std::find(kinds.begin(), kinds.end(), SignatureKind::kDict) != kinds.end();
}

// Full-length or truncated reconstruction of one shape in the
// normalized frame.
Eigen::MatrixX2d reconstruct(SignatureKind kind, const CoordSignature& coord, int valid_len,
                             const Dictionary* dict) {
  switch (kind) {
    case SignatureKind::kCoord:
      return truncate_signature(coord, valid_len).values;
    case SignatureKind::kDct:
      return dct_decode(truncate_signature(dct_encode(coord), valid_len)).values;
    case SignatureKind::kDict:
      if (valid_len == 0) return Eigen::MatrixX2d::Zero(coord.values.rows(), 2);
      return dict_decode(omp_encode(coord, *dict, valid_len), *dict).values;
    case SignatureKind::kPolar: {
      const PolarSignature ps =
          truncate_signature(polar_encode(as_contour(coord.values), {0.0, 0.0}), valid_len);
      return as_matrix(polar_decode(ps, {0.0, 0.0}));
    }
  }
  throw std::invalid_argument("analysis: unknown signature kind");
}

Eigen::MatrixX2d perturbed(SignatureKind kind, const CoordSignature& coord, double k,
                           std::uint64_t seed, const Dictionary* dict) {
  switch (kind) {
    case SignatureKind::kCoord:
      return perturb_relative(coord, k, seed).values;
    case SignatureKind::kDct:
      return dct_decode(perturb_relative(dct_encode(coord), k, seed)).values;
    case SignatureKind::kDict: {
      const int full = std::min(dict->atom_count(), static_cast<int>(2 * coord.values.rows()));
      const DictSignature code = omp_encode(coord, *dict, full);
      return dict_decode(perturb_relative(code, k, seed), *dict).values;
    }
    case SignatureKind::kPolar: {
      const PolarSignature ps = polar_encode(as_contour(coord.values), {0.0, 0.0});
      return as_matrix(polar_decode(perturb_relative(ps, k, seed), {0.0, 0.0}));
    }
  }
  throw std::invalid_argument("analysis: unknown signature kind");
}

std::vector<std::string> kind_names(const std::vector<SignatureKind>& kinds) {
  std::vector<std::string> names;
  for (SignatureKind k : kinds) names.emplace_back(signature_kind_name(k));
  return names;
}

template <class X>
void require_increasing(const std::vector<X>& xs, const char* what) {
  if (xs.empty()) throw std::invalid_argument(std::string("analysis: empty ") + what);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw std::invalid_argument(std::string("analysis: ") + what + " must be strictly increasing");
    }
  }
}

// Sums per-shape tables (rows x series) in index order and divides by
// the contributing shape count.
CurveTable mean_table(std::string x_name, std::vector<std::string> series, std::vector<double> xs,
                      const std::vector<std::vector<double>>& per_shape,
                      const std::vector<bool>& used) {
  CurveTable t{std::move(x_name), std::move(series), std::move(xs), {}};
  const std::size_t cols = t.series.size();
  t.values.assign(t.xs.size(), std::vector<double>(cols, 0.0));
  std::size_t count = 0;
  for (std::size_t s = 0; s < per_shape.size(); ++s) {
    if (!used[s]) continue;
    ++count;
    for (std::size_t r = 0; r < t.xs.size(); ++r) {
      for (std::size_t c = 0; c < cols; ++c) t.values[r][c] += per_shape[s][r * cols + c];
    }
  }
  if (count == 0) throw std::invalid_argument("analysis: no usable shapes");
  for (auto& row : t.values) {
    for (double& v : row) v /= static_cast<double>(count);
  }
  return t;
}

}  // namespace

double CurveTable::at(double x, std::string_view name) const {
  const auto col = std::find(series.begin(), series.end(), name);
  const auto row = std::find(xs.begin(), xs.end(), x);
  if (col == series.end() || row == xs.end()) throw std::out_of_range("CurveTable: no such cell");
  return values[static_cast<std::size_t>(row - xs.begin())]
               [static_cast<std::size_t>(col - series.begin())];
}

std::optional<SignatureKind> parse_signature_kind(std::string_view name) {
  if (name == "coord") return SignatureKind::kCoord;
  if (name == "dct") return SignatureKind::kDct;
  if (name == "dict") return SignatureKind::kDict;
  if (name == "polar") return SignatureKind::kPolar;
  return std::nullopt;
}

std::string_view signature_kind_name(SignatureKind kind) {
  switch (kind) {
    case SignatureKind::kCoord: return "coord";
    case SignatureKind::kDct: return "dct";
    case SignatureKind::kDict: return "dict";
    case SignatureKind::kPolar: return "polar";
  }
  return "unknown";
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

BBox entry_box(const ShapeEntry& e) { return e.bbox ? *e.bbox : bbox_of(e.contour); }

HardMask entry_mask(const ShapeEntry& e) { return fill_polygon(e.contour, e.width, e.height); }

Dictionary learn_corpus_dictionary(const ShapeCorpus& corpus, int m, std::uint64_t seed) {
  require_nonempty(corpus);
  std::vector<CoordSignature> sigs = map_shapes(corpus.size(), [&](std::size_t i) {
    return prepare(corpus.entries[i], m).coord;
  });
  DictionaryOptions opts;
  // Fewer atoms than samples; with one atom per sample the dictionary
  // simply memorizes the corpus.
  opts.atoms = static_cast<int>(std::clamp<std::size_t>(corpus.size() / 4, 1, 256));
  opts.seed = seed;
  return learn_dictionary(sigs, opts);
}

CurveTable run_compactness(const ShapeCorpus& corpus, const std::vector<SignatureKind>& kinds,
                           const std::vector<int>& valid_lens, int m, const Dictionary* dict) {
  require_nonempty(corpus);
  require_increasing(valid_lens, "valid lengths");
  if (kinds.empty()) throw std::invalid_argument("analysis: no signature kinds");
  Dictionary learned;
  if (needs_dict(kinds) && dict == nullptr) {
    learned = learn_corpus_dictionary(corpus, m);
    dict = &learned;
  }
  if (needs_dict(kinds)) check_dict(*dict, m);

  const std::size_t cols = kinds.size();
  const auto per_shape = map_shapes(corpus.size(), [&](std::size_t i) {
    const ShapeEntry& e = corpus.entries[i];
    const Prepared p = prepare(e, m);
    std::vector<double> row(valid_lens.size() * cols);
    for (std::size_t r = 0; r < valid_lens.size(); ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        row[r * cols + c] = 1.0 - iou_of(reconstruct(kinds[c], p.coord, valid_lens[r], dict), p, e);
      }
    }
    return row;
  });
  return mean_table("valid_len", kind_names(kinds),
                    std::vector<double>(valid_lens.begin(), valid_lens.end()), per_shape,
                    std::vector<bool>(corpus.size(), true));
}

CurveTable run_noise(const ShapeCorpus& corpus, const std::vector<SignatureKind>& kinds,
                     const std::vector<double>& ks, int seeds, int m, std::uint64_t seed,
                     const Dictionary* dict) {
  require_nonempty(corpus);
  require_increasing(ks, "noise levels");
  if (ks.front() < 0.0) throw std::invalid_argument("analysis: noise levels must be non-negative");
  if (seeds < 1) throw std::invalid_argument("analysis: seeds must be positive");
  if (kinds.empty()) throw std::invalid_argument("analysis: no signature kinds");
  Dictionary learned;
  if (needs_dict(kinds) && dict == nullptr) {
    learned = learn_corpus_dictionary(corpus, m);
    dict = &learned;
  }
  if (needs_dict(kinds)) check_dict(*dict, m);

  const std::size_t cols = kinds.size();
  const auto per_shape = map_shapes(corpus.size(), [&](std::size_t i) {
    const ShapeEntry& e = corpus.entries[i];
    const Prepared p = prepare(e, m);
    std::vector<double> row(ks.size() * cols, 0.0);
    for (std::size_t r = 0; r < ks.size(); ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (int s = 0; s < seeds; ++s) {
          const std::uint64_t sd = derive_seed(seed, i, r, static_cast<std::uint64_t>(s));
          sum += iou_of(perturbed(kinds[c], p.coord, ks[r], sd, dict), p, e);
        }
        row[r * cols + c] = sum / seeds;
      }
    }
    return row;
  });
  return mean_table("k", kind_names(kinds), ks, per_shape, std::vector<bool>(corpus.size(), true));
}

CurveTable run_polar_noise(const ShapeCorpus& corpus, const std::vector<double>& ks, int seeds,
                           int m, std::uint64_t seed) {
  require_nonempty(corpus);
  require_increasing(ks, "noise levels");
  if (ks.front() < 0.0) throw std::invalid_argument("analysis: noise levels must be non-negative");
  if (seeds < 1) throw std::invalid_argument("analysis: seeds must be positive");

  struct ShapeResult {
    bool used = false;
    std::vector<double> row;
  };
  const auto results = map_shapes(corpus.size(), [&](std::size_t i) {
    const ShapeEntry& e = corpus.entries[i];
    const Prepared p = prepare(e, m);
    const Contour normalized = as_contour(p.coord.values);
    ShapeResult out;
    if (!is_star_shaped_about(normalized, {0.0, 0.0})) return out;
    out.used = true;
    out.row.assign(ks.size() * 3, 0.0);
    const PolarSignature ps = polar_encode(normalized, {0.0, 0.0});
    const DctSignature ds = dct_encode(p.coord);
    for (std::size_t r = 0; r < ks.size(); ++r) {
      for (int s = 0; s < seeds; ++s) {
        const std::uint64_t sd = derive_seed(seed, i, r, static_cast<std::uint64_t>(s));
        for (int col = 0; col < 2; ++col) {
          const PolarSignature noisy{perturb_column(ps.coeffs, col, ks[r], sd)};
          out.row[r * 3 + static_cast<std::size_t>(col)] +=
              iou_of(as_matrix(polar_decode(noisy, {0.0, 0.0})), p, e);
        }
        out.row[r * 3 + 2] += iou_of(dct_decode(perturb_relative(ds, ks[r], sd)).values, p, e);
      }
      for (std::size_t c = 0; c < 3; ++c) out.row[r * 3 + c] /= seeds;
    }
    return out;
  });
  std::vector<std::vector<double>> rows;
  std::vector<bool> used;
  for (const auto& r : results) {
    rows.push_back(r.row);
    used.push_back(r.used);
  }
  return mean_table("k", {"r", "theta", "cartesian"}, ks, rows, used);
}

CurveTable run_point_count(const ShapeCorpus& corpus, const std::vector<int>& ms) {
  require_nonempty(corpus);
  require_increasing(ms, "point counts");
  const auto per_shape = map_shapes(corpus.size(), [&](std::size_t i) {
    const ShapeEntry& e = corpus.entries[i];
    std::vector<double> row(ms.size());
    for (std::size_t r = 0; r < ms.size(); ++r) {
      const Prepared p = prepare(e, ms[r]);
      row[r] = 1.0 - iou_of(dct_decode(dct_encode(p.coord)).values, p, e);
    }
    return row;
  });
  return mean_table("m", {"error"}, std::vector<double>(ms.begin(), ms.end()), per_shape,
                    std::vector<bool>(corpus.size(), true));
}

std::vector<Point2> box_template(int m) {
  if (m < 1) throw std::invalid_argument("box_template: m must be positive");
  // Perimeter 4, starting at the middle of the right side.
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double s = std::fmod(0.5 + 4.0 * i / m, 4.0);
    if (s < 1.0) {
      out.push_back({0.5, -0.5 + s});
    } else if (s < 2.0) {
      out.push_back({0.5 - (s - 1.0), 0.5});
    } else if (s < 3.0) {
      out.push_back({-0.5, 0.5 - (s - 2.0)});
    } else {
      out.push_back({-0.5 + (s - 3.0), -0.5});
    }
  }
  return out;
}

std::vector<Point2> circle_template(int m) {
  if (m < 1) throw std::invalid_argument("circle_template: m must be positive");
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double a = 2.0 * std::numbers::pi * i / m;
    out.push_back({0.5 * std::cos(a), 0.5 * std::sin(a)});
  }
  return out;
}

std::vector<OffsetStats> run_offset_stats(const ShapeCorpus& corpus, int m) {
  require_nonempty(corpus);
  const std::vector<Point2> zero(static_cast<std::size_t>(m), Point2{});
  const std::vector<Point2> box = box_template(m);
  const std::vector<Point2> circle = circle_template(m);
  const std::array<const std::vector<Point2>*, 3> templates{&zero, &box, &circle};

  // Per shape and scheme: sums of dx, dy, dx^2, dy^2.
  const auto per_shape = map_shapes(corpus.size(), [&](std::size_t i) {
    const Prepared p = prepare(corpus.entries[i], m);
    std::array<double, 12> acc{};
    for (std::size_t t = 0; t < templates.size(); ++t) {
      for (int j = 0; j < m; ++j) {
        const double dx = p.coord.values(j, 0) - (*templates[t])[static_cast<std::size_t>(j)].x;
        const double dy = p.coord.values(j, 1) - (*templates[t])[static_cast<std::size_t>(j)].y;
        acc[t * 4 + 0] += dx;
        acc[t * 4 + 1] += dy;
        acc[t * 4 + 2] += dx * dx;
        acc[t * 4 + 3] += dy * dy;
      }
    }
    return acc;
  });
  std::array<double, 12> total{};
  for (const auto& acc : per_shape) {
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += acc[j];
  }
  const double n = static_cast<double>(corpus.size()) * m;
  const std::array<const char*, 3> names{"origin", "box", "circle"};
  std::vector<OffsetStats> out;
  for (std::size_t t = 0; t < 3; ++t) {
    OffsetStats s;
    s.scheme = names[t];
    s.mean_dx = total[t * 4 + 0] / n;
    s.mean_dy = total[t * 4 + 1] / n;
    s.var_dx = std::max(0.0, total[t * 4 + 2] / n - s.mean_dx * s.mean_dx);
    s.var_dy = std::max(0.0, total[t * 4 + 3] / n - s.mean_dy * s.mean_dy);
    out.push_back(s);
  }
  return out;
}

HardSelection select_contour_hard(const ShapeCorpus& corpus, double threshold) {
  for (const ShapeEntry& e : corpus.entries) {
    if (!e.image_id || !e.category) {
      throw std::invalid_argument("select_contour_hard: corpus lacks image or category metadata");
    }
  }
  const auto hard = map_shapes(corpus.size(), [&](std::size_t i) {
    // int, not bool: vector<bool> elements share words across threads.
    try {
      return convexity(corpus.entries[i].contour) < threshold ? 1 : 0;
    } catch (const std::domain_error&) {
      return 0;  // flat shape, no hull area
    }
  });
  std::set<std::int64_t> images;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (hard[i]) images.insert(*corpus.entries[i].image_id);
  }
  HardSelection sel;
  sel.image_ids.assign(images.begin(), images.end());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const ShapeEntry& e = corpus.entries[i];
    if (images.count(*e.image_id)) {
      sel.shape_indices.push_back(i);
      ++sel.category_counts[*e.category];
    }
  }
  return sel;
}

std::vector<FitCorpusRow> run_fit_corpus(const ShapeCorpus& corpus,
                                         const FitCorpusOptions& options, bool zero_init) {
  require_nonempty(corpus);
  options.schedule.validate();
  const RenderConfig& cfg = options.schedule.render_cfg;
  const BBox unit{{0.0, 0.0}, 1.0, 1.0};
  return map_shapes(corpus.size(), [&](std::size_t i) {
    const ShapeEntry& e = corpus.entries[i];
    const BBox box = entry_box(e);
    // Target: the native-resolution shape, box-normalized.
    const HardMask target = fill_in_viewport(as_contour(coord_encode(e.contour, box).values), cfg);
    const Contour aligned = rotate_start_to_axis(normalize_orientation(e.contour), box.center);
    const DctSignature gt = dct_encode(coord_encode(resample_contour(aligned, options.m), box));
    DctSignature init =
        zero_init ? DctSignature{Eigen::MatrixX2d::Zero(options.m, 2)}
                  : init_signature(target, unit, options.m, options.valid_len, cfg.viewport);
    FitCorpusRow row;
    row.result = fit_contour(target, box, init, options.schedule, gt);
    row.init_iou = mask_iou(fill_in_viewport(as_contour(dct_decode(init).values), cfg), target);
    row.final_iou = mask_iou(
        fill_in_viewport(as_contour(dct_decode(row.result.final_signature).values), cfg), target);
    row.steps = row.result.steps_run;
    row.diverged = row.result.diverged;
    return row;
  });
}

}  // namespace contourkit
