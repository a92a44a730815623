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
#ifndef CONTOURKIT_IO_HPP_
#define CONTOURKIT_IO_HPP_

#include <fstream>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "contourkit/harness.hpp"

namespace contourkit {

struct MissingFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyCorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CocoLoadReport {
  std::size_t annotations = 0;
  std::size_t loaded = 0;
  std::size_t skipped_rle = 0;
  std::size_t skipped_crowd = 0;
  std::size_t skipped_degenerate = 0;  // no usable polygon, zero area or box
};

/// Reads COCO instance annotations. Polygon segmentations become shapes
/// (several polygons merged with merge_fragments); RLE and crowd
/// annotations are skipped and counted. Boxes are converted from
/// top-left/size to center/size.
ShapeCorpus load_coco_annotations(const std::string& path, CocoLoadReport* report = nullptr);

/// Corpus interchange JSON:
///   {"shapes": [{"points": [[x, y], ...], "width": W, "height": H,
///                "category": c, "image_id": i, "bbox": [cx, cy, w, h]}]}
/// category, image_id and bbox are optional.
ShapeCorpus load_corpus_json(const std::string& path);
void write_corpus_json(std::ostream& os, const ShapeCorpus& corpus);

// COCO when the top-level object has "annotations", corpus JSON otherwise.
ShapeCorpus load_any_corpus(const std::string& path, CocoLoadReport* report = nullptr);

// Shortest round-trip decimal form.
std::string format_number(double v);

/// Comma-separated rows with a header line and LF endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  std::ostream& os_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

void write_curve_csv(std::ostream& os, const CurveTable& table);
void write_pgm(std::ostream& os, const HardMask& mask);
// Soft values quantized to round(255 v).
void write_pgm(std::ostream& os, const SoftMask& mask);
// One CSV line per image row, no header.
void write_soft_csv(std::ostream& os, const SoftMask& mask);

/// Text format: line 1 holds the atom count K, line 2 the atom length 2M,
/// then K lines of 2M space-separated values.
void write_dictionary(std::ostream& os, const Dictionary& dict);
Dictionary read_dictionary(const std::string& path);

// Opens `path` for writing or throws std::runtime_error.
std::ofstream open_output(const std::string& path);

}  // namespace contourkit

#endif  // CONTOURKIT_IO_HPP_
