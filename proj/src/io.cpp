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
#include "contourkit/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace contourkit {
namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw MissingFileError("no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw MalformedInputError(path + ": " + e.what());
  }
}

bool usable(const Contour& c) {
  if (c.size() < 3 || !(perimeter(c) > 0.0) || !(polygon_area(c) > 0.0)) return false;
  try {
    bbox_of(c);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return true;
}

ShapeCorpus coco_from_json(const json& doc, const std::string& path, CocoLoadReport* report) {
  CocoLoadReport rep;
  ShapeCorpus corpus;
  try {
    if (!doc.is_object() || !doc.contains("annotations") || !doc.at("annotations").is_array()) {
      throw MalformedInputError(path + ": missing \"annotations\" array");
    }
    if (!doc.contains("images") || !doc.at("images").is_array()) {
      throw MalformedInputError(path + ": missing \"images\" array");
    }
    std::map<std::int64_t, std::pair<int, int>> dims;
    for (const json& img : doc.at("images")) {
      dims[img.at("id").get<std::int64_t>()] = {img.at("width").get<int>(),
                                               img.at("height").get<int>()};
    }
    for (const json& ann : doc.at("annotations")) {
      ++rep.annotations;
      if (ann.value("iscrowd", 0) != 0) {
        ++rep.skipped_crowd;
        continue;
      }
      const json& seg = ann.at("segmentation");
      if (seg.is_object()) {
        ++rep.skipped_rle;
        continue;
      }
      std::vector<Contour> parts;
      for (const json& poly : seg) {
        const auto flat = poly.get<std::vector<double>>();
        if (flat.size() < 6 || flat.size() % 2 != 0) continue;
        Contour c;
        for (std::size_t i = 0; i < flat.size(); i += 2) c.points.push_back({flat[i], flat[i + 1]});
        if (usable(c)) parts.push_back(std::move(c));
      }
      if (parts.empty()) {
        ++rep.skipped_degenerate;
        continue;
      }
      const std::int64_t image_id = ann.at("image_id").get<std::int64_t>();
      const auto it = dims.find(image_id);
      if (it == dims.end()) {
        throw MalformedInputError(path + ": annotation refers to unknown image " +
                                  std::to_string(image_id));
      }
      ShapeEntry e;
      e.contour = merge_fragments(parts);
      e.width = it->second.first;
      e.height = it->second.second;
      e.category = ann.at("category_id").get<int>();
      e.image_id = image_id;
      if (ann.contains("bbox")) {
        const auto b = ann.at("bbox").get<std::vector<double>>();
        if (b.size() == 4 && b[2] > 0.0 && b[3] > 0.0) {
          e.bbox = BBox{{b[0] + b[2] / 2.0, b[1] + b[3] / 2.0}, b[2], b[3]};
        }
      }
      corpus.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw MalformedInputError(path + ": " + e.what());
  }
  rep.loaded = corpus.size();
  if (report) *report = rep;
  if (corpus.empty()) throw EmptyCorpusError(path + ": no usable polygon shapes");
  return corpus;
}

ShapeCorpus corpus_from_json(const json& doc, const std::string& path) {
  ShapeCorpus corpus;
  try {
    if (!doc.is_object() || !doc.contains("shapes") || !doc.at("shapes").is_array()) {
      throw MalformedInputError(path + ": missing \"shapes\" array");
    }
    for (const json& s : doc.at("shapes")) {
      ShapeEntry e;
      for (const json& p : s.at("points")) {
        if (!p.is_array() || p.size() != 2) throw MalformedInputError(path + ": bad point");
        e.contour.points.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      e.width = s.at("width").get<int>();
      e.height = s.at("height").get<int>();
      if (e.width <= 0 || e.height <= 0) throw MalformedInputError(path + ": bad mask dims");
      validate_contour(e.contour);
      if (s.contains("category")) e.category = s.at("category").get<int>();
      if (s.contains("image_id")) e.image_id = s.at("image_id").get<std::int64_t>();
      if (s.contains("bbox")) {
        const auto b = s.at("bbox").get<std::vector<double>>();
        if (b.size() != 4 || !(b[2] > 0.0) || !(b[3] > 0.0)) {
          throw MalformedInputError(path + ": bad bbox");
        }
        e.bbox = BBox{{b[0], b[1]}, b[2], b[3]};
      }
      corpus.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw MalformedInputError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw MalformedInputError(path + ": " + e.what());
  }
  if (corpus.empty()) throw EmptyCorpusError(path + ": corpus has no shapes");
  return corpus;
}

}  // namespace

ShapeCorpus load_coco_annotations(const std::string& path, CocoLoadReport* report) {
  return coco_from_json(parse_file(path), path, report);
}

ShapeCorpus load_corpus_json(const std::string& path) {
  return corpus_from_json(parse_file(path), path);
}

ShapeCorpus load_any_corpus(const std::string& path, CocoLoadReport* report) {
  const json doc = parse_file(path);
  if (doc.is_object() && doc.contains("annotations")) return coco_from_json(doc, path, report);
  return corpus_from_json(doc, path);
}

void write_corpus_json(std::ostream& os, const ShapeCorpus& corpus) {
  // Written by hand so numbers use the same shortest form as the CSVs.
  os << "{\"shapes\": [";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const ShapeEntry& e = corpus.entries[i];
    os << (i ? ",\n  " : "\n  ") << "{\"width\": " << e.width << ", \"height\": " << e.height;
    if (e.category) os << ", \"category\": " << *e.category;
    if (e.image_id) os << ", \"image_id\": " << *e.image_id;
    if (e.bbox) {
      os << ", \"bbox\": [" << format_number(e.bbox->center.x) << ", "
         << format_number(e.bbox->center.y) << ", " << format_number(e.bbox->width) << ", "
         << format_number(e.bbox->height) << "]";
    }
    os << ", \"points\": [";
    for (std::size_t j = 0; j < e.contour.size(); ++j) {
      os << (j ? ", " : "") << "[" << format_number(e.contour[j].x) << ", "
         << format_number(e.contour[j].y) << "]";
    }
    os << "]}";
  }
  os << "\n]}\n";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header)
    : os_(os), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << '\n';
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (filled_ == columns_) throw std::logic_error("CsvWriter: too many cells in row");
  os_ << (filled_ ? "," : "") << v;
  ++filled_;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CsvWriter: row is incomplete");
  os_ << '\n';
  filled_ = 0;
}

void write_curve_csv(std::ostream& os, const CurveTable& table) {
  std::vector<std::string> header{table.x_name};
  header.insert(header.end(), table.series.begin(), table.series.end());
  CsvWriter csv(os, header);
  for (std::size_t r = 0; r < table.xs.size(); ++r) {
    csv.cell(table.xs[r]);
    for (double v : table.values[r]) csv.cell(v);
    csv.end_row();
  }
}

void write_pgm(std::ostream& os, const HardMask& mask) {
  os << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
  for (std::uint8_t b : mask.bits) os.put(static_cast<char>(b ? 255 : 0));
}

void write_pgm(std::ostream& os, const SoftMask& mask) {
  os << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
  for (double v : mask.values) {
    const double q = std::round(255.0 * std::fmin(1.0, std::fmax(0.0, v)));
    os.put(static_cast<char>(static_cast<unsigned char>(q)));
  }
}

void write_soft_csv(std::ostream& os, const SoftMask& mask) {
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) os << (x ? "," : "") << format_number(mask.at(x, y));
    os << '\n';
  }
}

void write_dictionary(std::ostream& os, const Dictionary& dict) {
  os << dict.atom_count() << '\n' << dict.atom_length() << '\n';
  for (Eigen::Index r = 0; r < dict.atoms.rows(); ++r) {
    for (Eigen::Index c = 0; c < dict.atoms.cols(); ++c) {
      os << (c ? " " : "") << format_number(dict.atoms(r, c));
    }
    os << '\n';
  }
}

Dictionary read_dictionary(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw MissingFileError("no such file: " + path);
  std::ifstream in(path);
  long long k = 0;
  long long len = 0;
  if (!(in >> k >> len) || k < 1 || len < 2) throw MalformedInputError(path + ": bad dictionary header");
  Dictionary d;
  d.atoms.resize(k, len);
  for (long long r = 0; r < k; ++r) {
    for (long long c = 0; c < len; ++c) {
      if (!(in >> d.atoms(r, c))) throw MalformedInputError(path + ": truncated dictionary");
    }
  }
  return d;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  return out;
}

}  // namespace contourkit
