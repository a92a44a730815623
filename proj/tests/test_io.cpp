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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "contourkit/io.hpp"
#include "doctest.h"

using namespace contourkit;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name, const std::string& text)
      : path(fs::temp_directory_path() / ("contourkit_test_" + name)) {
    std::ofstream(path) << text;
  }
  ~TempFile() { fs::remove(path); }
  std::string str() const { return path.string(); }
};

const char* kCoco = R"({
  "images": [{"id": 7, "width": 40, "height": 30}, {"id": 8, "width": 20, "height": 20}],
  "annotations": [
    {"id": 1, "image_id": 7, "category_id": 3, "iscrowd": 0, "bbox": [10, 5, 10, 10],
     "segmentation": [[10, 5, 20, 5, 15, 15]]},
    {"id": 2, "image_id": 8, "category_id": 4, "iscrowd": 0,
     "segmentation": [[0, 0, 1, 0, 0, 1], [5, 5, 9, 5, 9, 9, 5, 9]]},
    {"id": 3, "image_id": 7, "category_id": 3, "iscrowd": 1,
     "segmentation": {"counts": [1, 2], "size": [30, 40]}},
    {"id": 4, "image_id": 7, "category_id": 3, "iscrowd": 0,
     "segmentation": {"counts": "abc", "size": [30, 40]}},
    {"id": 5, "image_id": 7, "category_id": 3, "iscrowd": 0,
     "segmentation": [[1, 1, 2, 2, 3, 3]]}
  ]})";

}  // namespace

TEST_CASE("coco polygons become shapes") {
  const TempFile f("coco.json", kCoco);
  CocoLoadReport rep;
  const ShapeCorpus c = load_coco_annotations(f.str(), &rep);
  CHECK(rep.annotations == 5);
  CHECK(rep.loaded == 2);
  CHECK(rep.skipped_crowd == 1);
  CHECK(rep.skipped_rle == 1);
  CHECK(rep.skipped_degenerate == 1);
  REQUIRE(c.size() == 2);

  const ShapeEntry& tri = c.entries[0];
  CHECK(tri.contour.size() == 3);
  CHECK(tri.width == 40);
  CHECK(tri.height == 30);
  CHECK(*tri.category == 3);
  CHECK(*tri.image_id == 7);
  REQUIRE(tri.bbox.has_value());
  CHECK(tri.bbox->center.x == 15.0);
  CHECK(tri.bbox->center.y == 10.0);

  // Larger fragment first, each counter-clockwise.
  const ShapeEntry& two = c.entries[1];
  REQUIRE(two.contour.size() == 7);
  CHECK(two.contour[0] == Point2{5, 5});
  CHECK(two.contour[4] == Point2{0, 0});
  CHECK_FALSE(two.bbox.has_value());
}

TEST_CASE("load errors are typed") {
  CHECK_THROWS_AS(load_coco_annotations("/nonexistent/contourkit.json"), MissingFileError);
  const TempFile bad("bad.json", "{\"annotations\": [");
  CHECK_THROWS_AS(load_coco_annotations(bad.str()), MalformedInputError);
  const TempFile no_images("noimg.json", R"({"annotations": []})");
  CHECK_THROWS_AS(load_coco_annotations(no_images.str()), MalformedInputError);
  const TempFile empty("empty.json", R"({"images": [], "annotations": []})");
  CHECK_THROWS_AS(load_coco_annotations(empty.str()), EmptyCorpusError);
  const TempFile orphan("orphan.json", R"({"images": [], "annotations": [
      {"image_id": 1, "category_id": 1, "segmentation": [[0, 0, 4, 0, 0, 4]]}]})");
  CHECK_THROWS_AS(load_coco_annotations(orphan.str()), MalformedInputError);
  const TempFile no_shapes("noshapes.json", R"({"shapes": []})");
  CHECK_THROWS_AS(load_corpus_json(no_shapes.str()), EmptyCorpusError);
  const TempFile bad_shape("badshape.json", R"({"shapes": [{"points": [[0, 0], [1, 1]], "width": 4, "height": 4}]})");
  CHECK_THROWS_AS(load_corpus_json(bad_shape.str()), MalformedInputError);
}

TEST_CASE("corpus json round trip") {
  ShapeCorpus corpus = generate_synthetic_corpus(3, SynthMode::kStar, 1);
  corpus.entries[1].bbox = BBox{{60.25, 61.5}, 70, 71};
  corpus.entries[2].category.reset();
  std::ostringstream os;
  write_corpus_json(os, corpus);
  const TempFile f("corpus.json", os.str());
  const ShapeCorpus back = load_any_corpus(f.str());
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.entries[i].contour.points == corpus.entries[i].contour.points);
    CHECK(back.entries[i].image_id == corpus.entries[i].image_id);
    CHECK(back.entries[i].category == corpus.entries[i].category);
  }
  CHECK(back.entries[1].bbox->center.x == 60.25);
  CHECK_FALSE(back.entries[0].bbox.has_value());

  const TempFile coco("auto.json", kCoco);
  CHECK(load_any_corpus(coco.str()).size() == 2);
}

TEST_CASE("numbers use the shortest round-trip form") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-2.5e-10) == "-2.5e-10");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("csv writer enforces the column count") {
  std::ostringstream os;
  CsvWriter csv(os, {"a", "b"});
  csv.cell(1.5).cell(2LL);
  csv.end_row();
  CHECK(os.str() == "a,b\n1.5,2\n");
  csv.cell(1.0);
  CHECK_THROWS(csv.end_row());
  csv.cell(2.0);
  CHECK_THROWS(csv.cell(3.0));
}

TEST_CASE("curve csv layout") {
  CurveTable t;
  t.x_name = "k";
  t.series = {"coord", "dct"};
  t.xs = {0.1, 0.2};
  t.values = {{0.9, 0.8}, {0.7, 0.6}};
  std::ostringstream os;
  write_curve_csv(os, t);
  CHECK(os.str() == "k,coord,dct\n0.1,0.9,0.8\n0.2,0.7,0.6\n");
}

TEST_CASE("pgm output") {
  HardMask m(3, 2);
  m.set(1, 0, true);
  std::ostringstream os;
  write_pgm(os, m);
  const std::string s = os.str();
  CHECK(s.rfind("P5\n3 2\n255\n", 0) == 0);
  CHECK(s.size() == 11 + 6);
  CHECK(static_cast<unsigned char>(s[12]) == 255);
  SoftMask soft(2, 1);
  soft.values = {0.5, 2.0};
  std::ostringstream so;
  write_pgm(so, soft);
  CHECK(static_cast<unsigned char>(so.str()[11]) == 128);
  CHECK(static_cast<unsigned char>(so.str()[12]) == 255);
}

TEST_CASE("dictionary file round trip") {
  Dictionary d;
  d.atoms.resize(2, 4);
  d.atoms << 0.5, -0.5, 0.5, -0.5, 1.0 / 3.0, 0.0, 0.1, 0.2;
  std::ostringstream os;
  write_dictionary(os, d);
  const TempFile f("dict.txt", os.str());
  CHECK(read_dictionary(f.str()).atoms == d.atoms);
  const TempFile bad("dict_bad.txt", "2\n4\n1 2 3\n");
  CHECK_THROWS_AS(read_dictionary(bad.str()), MalformedInputError);
  CHECK_THROWS_AS(read_dictionary("/nonexistent/dict.txt"), MissingFileError);
}
