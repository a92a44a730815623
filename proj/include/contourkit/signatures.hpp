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
#ifndef CONTOURKIT_SIGNATURES_HPP_
#define CONTOURKIT_SIGNATURES_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "contourkit/geometry.hpp"

namespace contourkit {

// Box-normalized contour coordinates, one row per point.
struct CoordSignature {
  Eigen::MatrixX2d values;
};

// Per-axis orthonormal DCT-II of a CoordSignature.
struct DctSignature {
  Eigen::MatrixX2d coeffs;
};

// Column 0 holds the DCT of the radius sequence, column 1 the DCT of the
// unwrapped angle sequence.
struct PolarSignature {
  Eigen::MatrixX2d coeffs;
};

// Sparse code over a Dictionary; length equals the atom count.
struct DictSignature {
  Eigen::VectorXd coeffs;
};

// K x 2M, one unit-norm atom per row. Atoms are flattened signatures in
// point-major order (x0, y0, x1, y1, ...).
struct Dictionary {
  Eigen::MatrixXd atoms;

  int atom_count() const { return static_cast<int>(atoms.rows()); }
  int atom_length() const { return static_cast<int>(atoms.cols()); }
};

CoordSignature coord_encode(const Contour& c, const BBox& box);
Contour coord_decode(const CoordSignature& s, const BBox& box);

// Orthonormal DCT-II along each column, and its exact inverse (DCT-III).
Eigen::MatrixXd dct_columns(const Eigen::MatrixXd& x);
Eigen::MatrixXd idct_columns(const Eigen::MatrixXd& x);

DctSignature dct_encode(const CoordSignature& s);
CoordSignature dct_decode(const DctSignature& d);

/// Keeps the first ceil(n/2) coefficients of column 0 and the first
/// floor(n/2) of column 1, zeroing the rest. Throws std::out_of_range when
/// valid_len is outside [0, 2M].
CoordSignature truncate_signature(const CoordSignature& sig, int valid_len);
DctSignature truncate_signature(const DctSignature& sig, int valid_len);
PolarSignature truncate_signature(const PolarSignature& sig, int valid_len);
// Keeps the first valid_len entries; valid_len in [0, K].
DictSignature truncate_signature(const DictSignature& sig, int valid_len);

Eigen::MatrixX2d truncate_columns(const Eigen::MatrixX2d& m, int valid_len);

/// Adds N(0, (k |e|)^2) noise to every element e, visiting elements in
/// row-major order with a generator seeded by `seed`.
CoordSignature perturb_relative(const CoordSignature& sig, double k, std::uint64_t seed);
DctSignature perturb_relative(const DctSignature& sig, double k, std::uint64_t seed);
PolarSignature perturb_relative(const PolarSignature& sig, double k, std::uint64_t seed);
DictSignature perturb_relative(const DictSignature& sig, double k, std::uint64_t seed);

// Same noise model restricted to one column (0 or 1) of an M x 2 matrix.
Eigen::MatrixX2d perturb_column(const Eigen::MatrixX2d& m, int column, double k,
                                std::uint64_t seed);

/// Flattens an M x 2 signature point-major, matching the atom layout.
Eigen::VectorXd flatten_signature(const CoordSignature& s);
CoordSignature unflatten_signature(const Eigen::VectorXd& v);

/// Greedy orthogonal matching pursuit. Stops at `sparsity` atoms, when the
/// residual norm drops below 1e-10, when the selected set loses rank, or
/// when a new atom no longer reduces the residual.
DictSignature omp_encode(const CoordSignature& target, const Dictionary& dict, int sparsity);
DictSignature omp_encode(const Eigen::VectorXd& target, const Dictionary& dict, int sparsity);
CoordSignature dict_decode(const DictSignature& s, const Dictionary& dict);

struct DictionaryOptions {
  int atoms = 256;
  int sparsity = 8;
  int iterations = 30;
  std::uint64_t seed = 0;
};

/// Method of Optimal Directions: alternates OMP coding with a
/// least-squares atom update, renormalizing atoms every iteration. A
/// sample keeps its previous (rescaled) code whenever the fresh OMP code
/// reconstructs it worse, so the mean squared training residual never
/// increases. Atoms are returned in descending order of usage.
///
/// If `error_trace` is non-null it receives the mean squared residual
/// after each coding pass (iterations + 1 entries).
Dictionary learn_dictionary(const std::vector<CoordSignature>& corpus,
                            const DictionaryOptions& options,
                            std::vector<double>* error_trace = nullptr);

PolarSignature polar_encode(const Contour& c, Point2 center);
Contour polar_decode(const PolarSignature& p, Point2 center);

// Scalar loss together with its gradient with respect to the prediction.
struct SignatureLoss {
  double value = 0.0;
  Eigen::MatrixXd grad;
};

/// Element-wise smooth L1 (Huber with transition beta), mean-reduced.
SignatureLoss smooth_l1_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt,
                             double beta = 1.0);
SignatureLoss smooth_l1_loss(const DctSignature& pred, const DctSignature& gt,
                             double beta = 1.0);

}  // namespace contourkit

#endif  // CONTOURKIT_SIGNATURES_HPP_
