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
#ifndef CONTOURKIT_HARNESS_HPP_
#define CONTOURKIT_HARNESS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contourkit/fitter.hpp"
#include "contourkit/geometry.hpp"
#include "contourkit/signatures.hpp"

namespace contourkit {

struct ShapeEntry {
  Contour contour;  // native resolution, native pixel frame
  int width = 0;    // ground-truth mask dims
  int height = 0;
  std::optional<int> category;
  std::optional<std::int64_t> image_id;
  std::optional<BBox> bbox;  // annotation box, when the source had one
};

struct ShapeCorpus {
  std::vector<ShapeEntry> entries;
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

/// One row per x value, one column per series. `x_name` and `series`
/// become the CSV header.
struct CurveTable {
  std::string x_name;
  std::vector<std::string> series;
  std::vector<double> xs;
  std::vector<std::vector<double>> values;  // values[row][series]

  double at(double x, std::string_view name) const;
};

enum class SignatureKind { kCoord, kDct, kDict, kPolar };

std::optional<SignatureKind> parse_signature_kind(std::string_view name);
std::string_view signature_kind_name(SignatureKind kind);

// SplitMix64 finalizer over the combined words; used to give every
// (shape, setting, repeat) its own stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

// Bounding box of the entry: the annotation box if present, else the
// tight box of the contour.
BBox entry_box(const ShapeEntry& e);
HardMask entry_mask(const ShapeEntry& e);

/// Mean reconstruction error (1 - IoU against the shape's own fill at
/// native dims) per kind and valid length. Coordinate, DCT and polar
/// signatures are truncated; the dictionary kind is OMP-coded with
/// valid_len atoms. When the dictionary kind is requested without `dict`,
/// one is learned from the corpus with clamp(size / 4, 1, 256) atoms.
CurveTable run_compactness(const ShapeCorpus& corpus, const std::vector<SignatureKind>& kinds,
                           const std::vector<int>& valid_lens, int m,
                           const Dictionary* dict = nullptr);

// The dictionary run_compactness learns when none is supplied.
Dictionary learn_corpus_dictionary(const ShapeCorpus& corpus, int m, std::uint64_t seed = 0);

/// Mean IoU of decode(perturb_relative(encode(shape), k)) averaged over
/// `seeds` repeats, at full valid length.
CurveTable run_noise(const ShapeCorpus& corpus, const std::vector<SignatureKind>& kinds,
                     const std::vector<double>& ks, int seeds, int m, std::uint64_t seed = 0,
                     const Dictionary* dict = nullptr);

/// Series "r", "theta" and "cartesian": relative noise on the radius
/// coefficients only, on the angle coefficients only, and on both DCT
/// columns. Shapes that are not star-shaped about their box center are
/// skipped.
CurveTable run_polar_noise(const ShapeCorpus& corpus, const std::vector<double>& ks, int seeds,
                           int m, std::uint64_t seed = 0);

// Mean full-length reconstruction error per point count.
CurveTable run_point_count(const ShapeCorpus& corpus, const std::vector<int>& ms);

struct OffsetStats {
  std::string scheme;
  double mean_dx = 0.0;
  double mean_dy = 0.0;
  double var_dx = 0.0;
  double var_dy = 0.0;
};

/// Offsets of the box-normalized, resampled contour points from three
/// index-matched templates: "origin" (all zeros), "box" (m points at
/// uniform arc length on the unit box boundary) and "circle" (m points at
/// uniform angles on the radius-0.5 circle). Both templates start at
/// (0.5, 0) and run counter-clockwise. Variances are population variances.
std::vector<OffsetStats> run_offset_stats(const ShapeCorpus& corpus, int m);
std::vector<Point2> box_template(int m);
std::vector<Point2> circle_template(int m);

struct HardSelection {
  std::vector<std::int64_t> image_ids;    // ascending
  std::vector<std::size_t> shape_indices;  // ascending corpus indices
  std::map<int, std::size_t> category_counts;
};

/// Image-level selection: an image qualifies when any of its shapes has
/// convexity below `threshold`; all shapes of qualifying images are kept.
/// Throws std::invalid_argument when an entry lacks image or category.
HardSelection select_contour_hard(const ShapeCorpus& corpus, double threshold);

enum class SynthMode { kBlob, kStar, kConcave };

std::optional<SynthMode> parse_synth_mode(std::string_view name);
std::string_view synth_mode_name(SynthMode mode);

inline constexpr int kSynthPoints = 128;
inline constexpr int kSynthDims = 128;

/// r(theta) = r0 (1 + sum_h a_h cos(h theta + phi_h)) for h = 2..6,
/// sampled at `points` uniform angles around `center`.
Contour fourier_shape(const std::array<double, 5>& amplitudes,
                      const std::array<double, 5>& phases, double r0, Point2 center,
                      int points);

/// Fourier-perturbed circles on a 128 x 128 grid. blob: |a_h| <= 0.1;
/// concave: |a_h| <= 0.35; star: one dominant harmonic in 3..6 with
/// amplitude in [0.25, 0.4] plus |a_h| <= 0.03 elsewhere. Amplitudes are
/// scaled down when the radius would fall below 0.15 r0. Category is
/// the mode index, image id the shape index.
ShapeCorpus generate_synthetic_corpus(int n, SynthMode mode, std::uint64_t seed);

struct FitCorpusOptions {
  int m = 32;
  int valid_len = 8;
  FitSchedule schedule;
};

struct FitCorpusRow {
  double init_iou = 0.0;
  double final_iou = 0.0;
  int steps = 0;
  bool diverged = false;
  FitResult result;
};

/// Fits every shape: the target is the box-normalized shape filled into
/// the render grid, the init comes from init_signature and the
/// ground-truth signature is the full-length DCT of the resampled shape,
/// both started on the +x axis from the box center.
/// With `zero_init` the fit starts from all-zero coefficients instead.
std::vector<FitCorpusRow> run_fit_corpus(const ShapeCorpus& corpus,
                                         const FitCorpusOptions& options,
                                         bool zero_init = false);

}  // namespace contourkit

#endif  // CONTOURKIT_HARNESS_HPP_
