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
// contourkit: batch analyses, synthetic corpora, fitting and rendering.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "CLI11.hpp"
#include "contourkit/fitter.hpp"
#include "contourkit/harness.hpp"
#include "contourkit/io.hpp"
#include "contourkit/losses.hpp"
#include "contourkit/mesh.hpp"
#include "contourkit/render.hpp"

namespace ck = contourkit;

namespace {

struct Common {
  std::string input;
  std::string out;
  int m = 32;
  std::uint64_t seed = 0;
};

struct RenderFlags {
  int resolution = 64;
  double sigma = 0.0;
  std::string mesh = "shrink";
  double t = 0.1;
  double s = 0.0;
  int k_clusters = 4;
};

struct ScheduleFlags {
  int phase1 = 100;
  int decay = 50;
  int phase2 = 400;
  double step_size = 0.05;
  double momentum = 0.9;
  std::string loss = "lovasz";
};

void add_input(CLI::App* cmd, Common& c) {
  cmd->add_option("--input", c.input, "Corpus JSON or COCO instance annotations")
      ->required()
      ->check(CLI::ExistingFile);
}

void add_out(CLI::App* cmd, Common& c, const std::string& what) {
  cmd->add_option("--out", c.out, what)->required();
}

void add_m(CLI::App* cmd, Common& c) {
  cmd->add_option("--m", c.m, "Contour points per shape")->check(CLI::Range(3, 4096));
}

void add_seed(CLI::App* cmd, Common& c) { cmd->add_option("--seed", c.seed, "Base random seed"); }

void add_render_flags(CLI::App* cmd, RenderFlags& r) {
  cmd->add_option("--resolution", r.resolution, "Render grid size (square)")
      ->check(CLI::Range(1, 4096));
  cmd->add_option("--sigma", r.sigma, "Logistic sharpness; 0 = viewport width / 64")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--mesh", r.mesh, "Mesh construction")
      ->check(CLI::IsMember({"internal", "kmeans", "shrink"}));
  cmd->add_option("--t", r.t, "Internal linking area threshold")->check(CLI::NonNegativeNumber);
  cmd->add_option("--s", r.s, "Shrink scaling factor in [0, 1)")->check(CLI::Range(0.0, 0.999999));
  cmd->add_option("--k-clusters", r.k_clusters, "K-means linking cluster count")
      ->check(CLI::PositiveNumber);
}

void add_schedule_flags(CLI::App* cmd, ScheduleFlags& s) {
  cmd->add_option("--phase1-steps", s.phase1, "Signature-only steps")->check(CLI::NonNegativeNumber);
  cmd->add_option("--decay-steps", s.decay, "Steps over which lambda1 decays to 0")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--phase2-steps", s.phase2, "Steps with the silhouette loss")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--step-size", s.step_size, "Gradient step size")->check(CLI::PositiveNumber);
  cmd->add_option("--momentum", s.momentum, "Momentum in [0, 1)")->check(CLI::Range(0.0, 0.999999));
  cmd->add_option("--loss", s.loss, "Silhouette loss")
      ->check(CLI::IsMember({"lovasz", "mse", "bce", "dice"}));
}

ck::RenderConfig render_config(const RenderFlags& r) {
  ck::RenderConfig cfg;
  cfg.width = r.resolution;
  cfg.height = r.resolution;
  cfg.sigma = r.sigma;
  return cfg;
}

ck::MeshStrategy mesh_strategy(const RenderFlags& r, std::uint64_t seed) {
  if (r.mesh == "internal") return ck::InternalLinking{r.t};
  if (r.mesh == "kmeans") return ck::KMeansLinking{r.k_clusters, 20, seed};
  return ck::ShrinkLinking{r.s};
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      if constexpr (std::is_integral_v<T>) {
        if (v != std::floor(v)) throw std::invalid_argument(item);
      }
      out.push_back(static_cast<T>(v));
    } catch (const std::logic_error&) {
      throw std::invalid_argument(std::string(flag) + ": not a number: " + item);
    }
  }
  if (out.empty()) throw std::invalid_argument(std::string(flag) + ": empty list");
  return out;
}

std::vector<ck::SignatureKind> parse_kinds(const std::string& text) {
  std::vector<ck::SignatureKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto k = ck::parse_signature_kind(item);
    if (!k) throw std::invalid_argument("--kinds: unknown signature kind: " + item);
    out.push_back(*k);
  }
  if (out.empty()) throw std::invalid_argument("--kinds: empty list");
  return out;
}

ck::ShapeCorpus load(const std::string& path) {
  ck::CocoLoadReport report;
  ck::ShapeCorpus corpus = ck::load_any_corpus(path, &report);
  if (report.annotations > 0) {
    std::cerr << "loaded " << report.loaded << " of " << report.annotations << " annotations ("
              << report.skipped_rle << " RLE, " << report.skipped_crowd << " crowd, "
              << report.skipped_degenerate << " degenerate skipped)\n";
  }
  return corpus;
}

std::vector<int> default_valid_lens(int m) {
  std::vector<int> lens{0};
  for (int l = 2; l < 2 * m; l *= 2) lens.push_back(l);
  lens.push_back(2 * m);
  return lens;
}

void write_table(const std::string& path, const ck::CurveTable& table) {
  auto out = ck::open_output(path);
  ck::write_curve_csv(out, table);
}

void write_contour_json(std::ostream& os, const ck::Contour& c) {
  os << "{\"points\": [";
  for (std::size_t i = 0; i < c.size(); ++i) {
    os << (i ? ", " : "") << "[" << ck::format_number(c[i].x) << ", "
       << ck::format_number(c[i].y) << "]";
  }
  os << "]}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contour signatures, contour meshes and a differentiable silhouette renderer"};
  app.name("contourkit");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common c;
  RenderFlags rf;
  ScheduleFlags sf;
  std::string kinds_text;
  std::string lens_text;
  std::string ks_text = "0.1,0.2,0.3,0.4,0.5";
  std::string ms_text = "16,24,32,40,64";
  std::string dict_path;
  std::string dict_out;
  std::string trace_dir;
  std::string kind_text = "dct";
  std::string mode_text = "blob";
  std::string obj_path;
  std::string csv_path;
  int seeds = 16;
  int n = 20;
  int valid_len = 8;
  int index = 0;
  double threshold = 0.4;
  bool hard = false;
  bool zero_init = false;

  auto* compactness = app.add_subcommand("analyze-compactness",
                                         "Mean reconstruction error per signature kind and valid length");
  add_input(compactness, c);
  add_out(compactness, c, "Output CSV");
  add_m(compactness, c);
  add_seed(compactness, c);
  kinds_text = "coord,dct,dict";
  compactness->add_option("--kinds", kinds_text, "Comma list of coord, dct, dict, polar");
  compactness->add_option("--valid-lens", lens_text, "Comma list of valid lengths (default 0, 2, 4, ..., 2m)");
  compactness->add_option("--dict", dict_path, "Dictionary file; learned from the corpus if absent")
      ->check(CLI::ExistingFile);
  compactness->add_option("--dict-out", dict_out, "Write the learned dictionary here");

  std::string noise_kinds = "coord,dct";
  auto* noise = app.add_subcommand("analyze-noise", "Mean IoU under relative Gaussian signature noise");
  add_input(noise, c);
  add_out(noise, c, "Output CSV");
  add_m(noise, c);
  add_seed(noise, c);
  noise->add_option("--kinds", noise_kinds, "Comma list of coord, dct, dict, polar");
  noise->add_option("--noise-k", ks_text, "Comma list of relative noise levels k");
  noise->add_option("--seeds", seeds, "Noise draws per shape and level")->check(CLI::PositiveNumber);
  noise->add_option("--dict", dict_path, "Dictionary file for the dict kind")->check(CLI::ExistingFile);

  auto* polar = app.add_subcommand("analyze-polar", "Polar signature noise: r only, theta only, Cartesian");
  add_input(polar, c);
  add_out(polar, c, "Output CSV");
  add_m(polar, c);
  add_seed(polar, c);
  polar->add_option("--noise-k", ks_text, "Comma list of relative noise levels k");
  polar->add_option("--seeds", seeds, "Noise draws per shape and level")->check(CLI::PositiveNumber);

  auto* points = app.add_subcommand("analyze-points", "Full-length reconstruction error per point count");
  add_input(points, c);
  add_out(points, c, "Output CSV");
  points->add_option("--ms", ms_text, "Comma list of point counts, ascending");

  auto* offsets = app.add_subcommand("analyze-offsets", "Offset statistics against origin, box and circle templates");
  add_input(offsets, c);
  add_out(offsets, c, "Output CSV");
  add_m(offsets, c);

  auto* hard_cmd = app.add_subcommand("select-hard", "Images holding a shape with convexity below the threshold");
  add_input(hard_cmd, c);
  add_out(hard_cmd, c, "Output JSON report");
  hard_cmd->add_option("--threshold", threshold, "Convexity threshold");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic Fourier-shape corpus");
  add_out(synth, c, "Output corpus JSON");
  add_seed(synth, c);
  synth->add_option("--n", n, "Number of shapes")->check(CLI::PositiveNumber);
  synth->add_option("--mode", mode_text, "Shape family")->check(CLI::IsMember({"blob", "star", "concave"}));

  auto* fit = app.add_subcommand("fit", "Fit DCT signatures to every shape's mask");
  add_input(fit, c);
  add_out(fit, c, "Output CSV of per-shape IoU");
  add_m(fit, c);
  add_seed(fit, c);
  add_render_flags(fit, rf);
  add_schedule_flags(fit, sf);
  fit->add_option("--valid-len", valid_len, "Valid length of the initial signature");
  fit->add_option("--trace-dir", trace_dir, "Per-shape loss/IoU traces and final contours");
  fit->add_flag("--zero-init", zero_init, "Start from all-zero coefficients");

  auto* render_cmd = app.add_subcommand("render", "Render one corpus shape through its contour mesh");
  add_input(render_cmd, c);
  add_out(render_cmd, c, "Output PGM");
  add_m(render_cmd, c);
  add_seed(render_cmd, c);
  add_render_flags(render_cmd, rf);
  render_cmd->add_option("--index", index, "Shape index in the corpus")->check(CLI::NonNegativeNumber);
  render_cmd->add_flag("--hard", hard, "Hard (indicator) coverage");
  render_cmd->add_option("--csv", csv_path, "Also write raw coverage values as CSV");
  render_cmd->add_option("--obj", obj_path, "Also write the mesh as OBJ");

  auto* roundtrip = app.add_subcommand("roundtrip", "Encode/decode every shape and report the point error");
  add_input(roundtrip, c);
  add_out(roundtrip, c, "Output CSV");
  add_m(roundtrip, c);
  roundtrip->add_option("--kind", kind_text, "Signature kind")->check(CLI::IsMember({"coord", "dct", "polar"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (compactness->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      const auto kinds = parse_kinds(kinds_text);
      const auto lens = lens_text.empty() ? default_valid_lens(c.m) : parse_list<int>(lens_text, "--valid-lens");
      for (int l : lens) {
        if (l < 0 || l > 2 * c.m) throw std::invalid_argument("--valid-lens: values must lie in [0, 2m]");
      }
      ck::Dictionary dict;
      const bool wants_dict = std::find(kinds.begin(), kinds.end(), ck::SignatureKind::kDict) != kinds.end();
      if (wants_dict) {
        dict = dict_path.empty() ? ck::learn_corpus_dictionary(corpus, c.m, c.seed)
                                 : ck::read_dictionary(dict_path);
        if (!dict_out.empty()) {
          auto out = ck::open_output(dict_out);
          ck::write_dictionary(out, dict);
        }
      }
      write_table(c.out, ck::run_compactness(corpus, kinds, lens, c.m, wants_dict ? &dict : nullptr));
    } else if (noise->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      const auto kinds = parse_kinds(noise_kinds);
      ck::Dictionary dict;
      const bool wants_dict = std::find(kinds.begin(), kinds.end(), ck::SignatureKind::kDict) != kinds.end();
      if (wants_dict) {
        dict = dict_path.empty() ? ck::learn_corpus_dictionary(corpus, c.m, c.seed)
                                 : ck::read_dictionary(dict_path);
      }
      write_table(c.out, ck::run_noise(corpus, kinds, parse_list<double>(ks_text, "--noise-k"), seeds,
                                       c.m, c.seed, wants_dict ? &dict : nullptr));
    } else if (polar->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      write_table(c.out, ck::run_polar_noise(corpus, parse_list<double>(ks_text, "--noise-k"), seeds,
                                             c.m, c.seed));
    } else if (points->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      write_table(c.out, ck::run_point_count(corpus, parse_list<int>(ms_text, "--ms")));
    } else if (offsets->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      auto out = ck::open_output(c.out);
      ck::CsvWriter csv(out, {"scheme", "mean_dx", "mean_dy", "var_dx", "var_dy"});
      for (const auto& s : ck::run_offset_stats(corpus, c.m)) {
        csv.cell(s.scheme).cell(s.mean_dx).cell(s.mean_dy).cell(s.var_dx).cell(s.var_dy);
        csv.end_row();
      }
    } else if (hard_cmd->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      const ck::HardSelection sel = ck::select_contour_hard(corpus, threshold);
      auto out = ck::open_output(c.out);
      out << "{\"threshold\": " << ck::format_number(threshold) << ", \"images\": " << sel.image_ids.size()
          << ", \"shapes\": " << sel.shape_indices.size()
          << ", \"categories\": " << sel.category_counts.size() << ",\n \"image_ids\": [";
      for (std::size_t i = 0; i < sel.image_ids.size(); ++i) out << (i ? ", " : "") << sel.image_ids[i];
      out << "],\n \"category_counts\": {";
      bool first = true;
      for (const auto& [cat, count] : sel.category_counts) {
        out << (first ? "" : ", ") << "\"" << cat << "\": " << count;
        first = false;
      }
      out << "}}\n";
      std::cout << sel.image_ids.size() << " images, " << sel.shape_indices.size() << " shapes, "
                << sel.category_counts.size() << " categories\n";
    } else if (synth->parsed()) {
      const auto corpus = ck::generate_synthetic_corpus(n, *ck::parse_synth_mode(mode_text), c.seed);
      auto out = ck::open_output(c.out);
      ck::write_corpus_json(out, corpus);
    } else if (fit->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      ck::FitCorpusOptions opts;
      opts.m = c.m;
      opts.valid_len = valid_len;
      if (valid_len < 0 || valid_len > 2 * c.m) throw std::invalid_argument("--valid-len must lie in [0, 2m]");
      opts.schedule.phase1_steps = zero_init ? 0 : sf.phase1;
      opts.schedule.lambda1_decay_steps = zero_init ? 0 : sf.decay;
      opts.schedule.phase2_steps = sf.phase2;
      opts.schedule.step_size = sf.step_size;
      opts.schedule.momentum = sf.momentum;
      opts.schedule.loss_kind = *ck::parse_loss_kind(sf.loss);
      opts.schedule.mesh_strategy = mesh_strategy(rf, c.seed);
      opts.schedule.render_cfg = render_config(rf);
      const auto rows = ck::run_fit_corpus(corpus, opts, zero_init);
      auto out = ck::open_output(c.out);
      ck::CsvWriter csv(out, {"index", "init_iou", "final_iou", "steps", "diverged"});
      for (std::size_t i = 0; i < rows.size(); ++i) {
        csv.cell(static_cast<long long>(i)).cell(rows[i].init_iou).cell(rows[i].final_iou);
        csv.cell(static_cast<long long>(rows[i].steps)).cell(static_cast<long long>(rows[i].diverged));
        csv.end_row();
      }
      if (!trace_dir.empty()) {
        std::filesystem::create_directories(trace_dir);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const std::string stem = trace_dir + "/shape_" + std::to_string(i);
          auto tf = ck::open_output(stem + "_trace.csv");
          ck::CsvWriter tcsv(tf, {"step", "loss", "iou"});
          const ck::FitResult& r = rows[i].result;
          for (int s = 0; s < r.steps_run; ++s) {
            tcsv.cell(static_cast<long long>(s)).cell(r.loss_trace[static_cast<std::size_t>(s)]);
            tcsv.cell(r.iou_trace[static_cast<std::size_t>(s)]);
            tcsv.end_row();
          }
          auto cf = ck::open_output(stem + "_contour.json");
          write_contour_json(cf, r.final_contour);
        }
      }
    } else if (render_cmd->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      if (static_cast<std::size_t>(index) >= corpus.size()) throw std::out_of_range("--index beyond corpus size");
      const ck::ShapeEntry& e = corpus.entries[static_cast<std::size_t>(index)];
      const ck::BBox box = ck::entry_box(e);
      const ck::CoordSignature sig = ck::coord_encode(ck::resample_contour(e.contour, c.m), box);
      ck::Contour normalized;
      for (Eigen::Index r = 0; r < sig.values.rows(); ++r) normalized.points.push_back({sig.values(r, 0), sig.values(r, 1)});
      const ck::ContourMesh mesh = ck::build_mesh(normalized, mesh_strategy(rf, c.seed));
      ck::RenderConfig cfg = render_config(rf);
      cfg.mode = hard ? ck::RenderMode::kHard : ck::RenderMode::kSoft;
      const ck::SoftMask mask = ck::render(mesh, cfg);
      {
        auto out = ck::open_output(c.out);
        ck::write_pgm(out, mask);
      }
      if (!csv_path.empty()) {
        auto out = ck::open_output(csv_path);
        ck::write_soft_csv(out, mask);
      }
      if (!obj_path.empty()) {
        auto out = ck::open_output(obj_path);
        ck::write_obj(out, mesh);
      }
    } else if (roundtrip->parsed()) {
      const ck::ShapeCorpus corpus = load(c.input);
      auto out = ck::open_output(c.out);
      ck::CsvWriter csv(out, {"index", "max_error"});
      double worst = 0.0;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const ck::ShapeEntry& e = corpus.entries[i];
        const ck::BBox box = ck::entry_box(e);
        const ck::Contour src = ck::resample_contour(e.contour, c.m);
        ck::Contour back;
        if (kind_text == "coord") {
          back = ck::coord_decode(ck::coord_encode(src, box), box);
        } else if (kind_text == "dct") {
          back = ck::coord_decode(ck::dct_decode(ck::dct_encode(ck::coord_encode(src, box))), box);
        } else {
          back = ck::polar_decode(ck::polar_encode(src, box.center), box.center);
        }
        double err = 0.0;
        for (std::size_t j = 0; j < src.size(); ++j) {
          err = std::max(err, std::hypot(src[j].x - back[j].x, src[j].y - back[j].y));
        }
        worst = std::max(worst, err);
        csv.cell(static_cast<long long>(i)).cell(err);
        csv.end_row();
      }
      std::cout << "max round-trip error " << ck::format_number(worst) << "\n";
    }
  } catch (const std::exception& ex) {
    std::cerr << "contourkit: error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
