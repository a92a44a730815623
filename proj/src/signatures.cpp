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
#include "contourkit/signatures.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace contourkit {
namespace {

void check_box(const BBox& box) {
  if (!(box.width > 0.0) || !(box.height > 0.0)) {
    throw std::invalid_argument("box size must be strictly positive");
  }
}

// Row k holds the k-th orthonormal DCT-II basis vector of length n.
const Eigen::MatrixXd& dct_basis(Eigen::Index n) {
  thread_local std::unordered_map<Eigen::Index, Eigen::MatrixXd> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd basis(n, n);
  const double nd = static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double alpha = k == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
    for (Eigen::Index i = 0; i < n; ++i) {
      basis(k, i) = alpha * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * nd));
    }
  }
  return cache.emplace(n, std::move(basis)).first->second;
}

Eigen::MatrixXd perturb_masked(const Eigen::MatrixXd& m, double k, std::uint64_t seed,
                               int only_column) {
  if (k < 0.0) throw std::invalid_argument("perturb: k must be non-negative");
  Eigen::MatrixXd out = m;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      // Draw for every element so a column-restricted run sees the same
      // stream as an unrestricted one.
      const double z = normal(rng);
      if (only_column >= 0 && c != only_column) continue;
      out(r, c) += k * std::abs(m(r, c)) * z;
    }
  }
  return out;
}

}  // namespace

CoordSignature coord_encode(const Contour& c, const BBox& box) {
  check_box(box);
  CoordSignature s{Eigen::MatrixX2d(static_cast<Eigen::Index>(c.size()), 2)};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    s.values(r, 0) = (c[i].x - box.center.x) / box.width;
    s.values(r, 1) = (c[i].y - box.center.y) / box.height;
  }
  return s;
}

Contour coord_decode(const CoordSignature& s, const BBox& box) {
  check_box(box);
  Contour c;
  c.points.reserve(static_cast<std::size_t>(s.values.rows()));
  for (Eigen::Index r = 0; r < s.values.rows(); ++r) {
    c.points.push_back({s.values(r, 0) * box.width + box.center.x,
                        s.values(r, 1) * box.height + box.center.y});
  }
  return c;
}

Eigen::MatrixXd dct_columns(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) return x;
  return dct_basis(x.rows()) * x;
}

Eigen::MatrixXd idct_columns(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) return x;
  return dct_basis(x.rows()).transpose() * x;
}

DctSignature dct_encode(const CoordSignature& s) { return {dct_columns(s.values)}; }

CoordSignature dct_decode(const DctSignature& d) { return {idct_columns(d.coeffs)}; }

Eigen::MatrixX2d truncate_columns(const Eigen::MatrixX2d& m, int valid_len) {
  const auto rows = m.rows();
  if (valid_len < 0 || valid_len > 2 * rows) {
    throw std::out_of_range("truncate_signature: valid_len " + std::to_string(valid_len) +
                            " outside [0, " + std::to_string(2 * rows) + "]");
  }
  const Eigen::Index keep_x = (valid_len + 1) / 2;
  const Eigen::Index keep_y = valid_len / 2;
  Eigen::MatrixX2d out = m;
  out.col(0).tail(rows - keep_x).setZero();
  out.col(1).tail(rows - keep_y).setZero();
  return out;
}

CoordSignature truncate_signature(const CoordSignature& sig, int valid_len) {
  return {truncate_columns(sig.values, valid_len)};
}

DctSignature truncate_signature(const DctSignature& sig, int valid_len) {
  return {truncate_columns(sig.coeffs, valid_len)};
}

PolarSignature truncate_signature(const PolarSignature& sig, int valid_len) {
  return {truncate_columns(sig.coeffs, valid_len)};
}

DictSignature truncate_signature(const DictSignature& sig, int valid_len) {
  const auto k = sig.coeffs.size();
  if (valid_len < 0 || valid_len > k) {
    throw std::out_of_range("truncate_signature: valid_len " + std::to_string(valid_len) +
                            " outside [0, " + std::to_string(k) + "]");
  }
  DictSignature out = sig;
  out.coeffs.tail(k - valid_len).setZero();
  return out;
}

CoordSignature perturb_relative(const CoordSignature& sig, double k, std::uint64_t seed) {
  return {perturb_masked(sig.values, k, seed, -1)};
}

DctSignature perturb_relative(const DctSignature& sig, double k, std::uint64_t seed) {
  return {perturb_masked(sig.coeffs, k, seed, -1)};
}

PolarSignature perturb_relative(const PolarSignature& sig, double k, std::uint64_t seed) {
  return {perturb_masked(sig.coeffs, k, seed, -1)};
}

DictSignature perturb_relative(const DictSignature& sig, double k, std::uint64_t seed) {
  return {perturb_masked(sig.coeffs, k, seed, -1)};
}

Eigen::MatrixX2d perturb_column(const Eigen::MatrixX2d& m, int column, double k,
                                std::uint64_t seed) {
  if (column < 0 || column > 1) throw std::invalid_argument("perturb_column: column must be 0 or 1");
  return perturb_masked(m, k, seed, column);
}

Eigen::VectorXd flatten_signature(const CoordSignature& s) {
  Eigen::VectorXd v(2 * s.values.rows());
  for (Eigen::Index r = 0; r < s.values.rows(); ++r) {
    v(2 * r) = s.values(r, 0);
    v(2 * r + 1) = s.values(r, 1);
  }
  return v;
}

CoordSignature unflatten_signature(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("unflatten_signature: odd length");
  CoordSignature s{Eigen::MatrixX2d(v.size() / 2, 2)};
  for (Eigen::Index r = 0; r < s.values.rows(); ++r) {
    s.values(r, 0) = v(2 * r);
    s.values(r, 1) = v(2 * r + 1);
  }
  return s;
}

PolarSignature polar_encode(const Contour& c, Point2 center) {
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixX2d rt(n, 2);
  double prev_raw = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point2 d = c[static_cast<std::size_t>(i)] - center;
    const double r = std::hypot(d.x, d.y);
    if (!(r > 0.0)) throw std::invalid_argument("polar_encode: point coincides with center");
    const double raw = std::atan2(d.y, d.x);
    rt(i, 0) = r;
    if (i == 0) {
      rt(i, 1) = raw;
    } else {
      double step = raw - prev_raw;
      if (step > std::numbers::pi) step -= 2.0 * std::numbers::pi;
      if (step <= -std::numbers::pi) step += 2.0 * std::numbers::pi;
      rt(i, 1) = rt(i - 1, 1) + step;
    }
    prev_raw = raw;
  }
  return {dct_columns(rt)};
}

Contour polar_decode(const PolarSignature& p, Point2 center) {
  const Eigen::MatrixXd rt = idct_columns(p.coeffs);
  Contour c;
  c.points.reserve(static_cast<std::size_t>(rt.rows()));
  for (Eigen::Index i = 0; i < rt.rows(); ++i) {
    c.points.push_back({center.x + rt(i, 0) * std::cos(rt(i, 1)),
                        center.y + rt(i, 0) * std::sin(rt(i, 1))});
  }
  return c;
}

SignatureLoss smooth_l1_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt,
                             double beta) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols()) {
    throw std::invalid_argument("smooth_l1_loss: shape mismatch");
  }
  if (!(beta > 0.0)) throw std::invalid_argument("smooth_l1_loss: beta must be positive");
  const double n = static_cast<double>(pred.size());
  SignatureLoss out{0.0, Eigen::MatrixXd::Zero(pred.rows(), pred.cols())};
  if (pred.size() == 0) return out;
  for (Eigen::Index c = 0; c < pred.cols(); ++c) {
    for (Eigen::Index r = 0; r < pred.rows(); ++r) {
      const double d = pred(r, c) - gt(r, c);
      const double a = std::abs(d);
      if (a < beta) {
        out.value += 0.5 * d * d / beta;
        out.grad(r, c) = d / beta / n;
      } else {
        out.value += a - 0.5 * beta;
        out.grad(r, c) = (d > 0.0 ? 1.0 : -1.0) / n;
      }
    }
  }
  out.value /= n;
  return out;
}

SignatureLoss smooth_l1_loss(const DctSignature& pred, const DctSignature& gt, double beta) {
  return smooth_l1_loss(Eigen::MatrixXd(pred.coeffs), Eigen::MatrixXd(gt.coeffs), beta);
}

}  // namespace contourkit
