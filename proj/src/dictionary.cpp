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
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "contourkit/signatures.hpp"

namespace contourkit {
namespace {

constexpr double kResidualTolerance = 1e-10;

Eigen::VectorXd random_unit(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  const double norm = v.norm();
  return norm > 0.0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(n, 0);
}

}  // namespace

DictSignature omp_encode(const Eigen::VectorXd& target, const Dictionary& dict, int sparsity) {
  if (dict.atom_length() != target.size()) {
    throw std::invalid_argument("omp_encode: atom length does not match signature length");
  }
  if (sparsity < 1) throw std::invalid_argument("omp_encode: sparsity must be >= 1");

  const Eigen::Index k = dict.atoms.rows();
  DictSignature out{Eigen::VectorXd::Zero(k)};
  std::vector<Eigen::Index> support;
  Eigen::VectorXd solution;
  Eigen::VectorXd residual = target;
  double residual_norm = residual.norm();
  std::vector<bool> used(static_cast<std::size_t>(k), false);

  while (static_cast<int>(support.size()) < sparsity && residual_norm >= kResidualTolerance) {
    const Eigen::VectorXd corr = dict.atoms * residual;
    Eigen::Index best = -1;
    double best_abs = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double a = std::abs(corr(j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best < 0) break;

    std::vector<Eigen::Index> trial = support;
    trial.push_back(best);
    Eigen::MatrixXd basis(target.size(), static_cast<Eigen::Index>(trial.size()));
    for (std::size_t c = 0; c < trial.size(); ++c) {
      basis.col(static_cast<Eigen::Index>(c)) = dict.atoms.row(trial[c]).transpose();
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    if (qr.rank() < basis.cols()) break;
    const Eigen::VectorXd x = qr.solve(target);
    const Eigen::VectorXd next_residual = target - basis * x;
    const double next_norm = next_residual.norm();
    if (!(next_norm < residual_norm)) break;

    support = std::move(trial);
    used[static_cast<std::size_t>(best)] = true;
    solution = x;
    residual = next_residual;
    residual_norm = next_norm;
  }

  for (std::size_t c = 0; c < support.size(); ++c) {
    out.coeffs(support[c]) = solution(static_cast<Eigen::Index>(c));
  }
  return out;
}

DictSignature omp_encode(const CoordSignature& target, const Dictionary& dict, int sparsity) {
  return omp_encode(flatten_signature(target), dict, sparsity);
}

CoordSignature dict_decode(const DictSignature& s, const Dictionary& dict) {
  if (s.coeffs.size() != dict.atoms.rows()) {
    throw std::invalid_argument("dict_decode: coefficient count does not match atom count");
  }
  const Eigen::VectorXd flat = dict.atoms.transpose() * s.coeffs;
  return unflatten_signature(flat);
}

Dictionary learn_dictionary(const std::vector<CoordSignature>& corpus,
                            const DictionaryOptions& options,
                            std::vector<double>* error_trace) {
  if (corpus.empty()) throw std::invalid_argument("learn_dictionary: empty corpus");
  if (options.atoms < 1) throw std::invalid_argument("learn_dictionary: atoms must be >= 1");
  if (options.sparsity < 1) throw std::invalid_argument("learn_dictionary: sparsity must be >= 1");
  if (options.iterations < 0) throw std::invalid_argument("learn_dictionary: negative iterations");

  const auto n = static_cast<Eigen::Index>(corpus.size());
  const Eigen::Index dim = 2 * corpus.front().values.rows();
  const Eigen::Index k = options.atoms;
  Eigen::MatrixXd samples(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = corpus[static_cast<std::size_t>(i)];
    if (2 * s.values.rows() != dim) {
      throw std::invalid_argument("learn_dictionary: signatures differ in length");
    }
    samples.row(i) = flatten_signature(s).transpose();
  }

  std::mt19937_64 rng(options.seed);
  Dictionary dict{Eigen::MatrixXd(k, dim)};
  {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index a = 0; a < k; ++a) {
      Eigen::VectorXd atom;
      if (a < n) {
        atom = samples.row(order[static_cast<std::size_t>(a)]).transpose();
        const double norm = atom.norm();
        atom = norm > 0.0 ? Eigen::VectorXd(atom / norm) : random_unit(dim, rng);
      } else {
        atom = random_unit(dim, rng);
      }
      dict.atoms.row(a) = atom.transpose();
    }
  }

  Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(n, k);
  Eigen::VectorXd sample_err(n);
  if (error_trace) error_trace->clear();

  auto coding_pass = [&](bool first) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd x = samples.row(i).transpose();
      const DictSignature fresh = omp_encode(x, dict, options.sparsity);
      const double fresh_err = (x - dict.atoms.transpose() * fresh.coeffs).squaredNorm();
      const double old_err =
          (x - dict.atoms.transpose() * codes.row(i).transpose()).squaredNorm();
      if (first || fresh_err < old_err) {
        codes.row(i) = fresh.coeffs.transpose();
        sample_err(i) = fresh_err;
      } else {
        sample_err(i) = old_err;
      }
    }
    if (error_trace) error_trace->push_back(sample_err.mean());
  };

  coding_pass(true);
  for (int iter = 0; iter < options.iterations; ++iter) {
    // Least-squares atom update; the minimum-norm solution leaves unused
    // atoms at zero.
    Eigen::MatrixXd updated = codes.completeOrthogonalDecomposition().solve(samples);

    std::vector<Eigen::Index> worst(static_cast<std::size_t>(n));
    std::iota(worst.begin(), worst.end(), Eigen::Index{0});
    std::stable_sort(worst.begin(), worst.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return sample_err(a) > sample_err(b); });
    std::size_t next_worst = 0;

    for (Eigen::Index a = 0; a < k; ++a) {
      const double norm = updated.row(a).norm();
      if (norm > 1e-12) {
        updated.row(a) /= norm;
        codes.col(a) *= norm;
        continue;
      }
      // Dead atom: its product with the codes is zero, so replacing it
      // leaves the current reconstruction unchanged.
      codes.col(a).setZero();
      Eigen::VectorXd fresh;
      while (next_worst < worst.size()) {
        const Eigen::Index i = worst[next_worst++];
        const Eigen::VectorXd r = samples.row(i).transpose() -
                                  updated.transpose() * codes.row(i).transpose();
        if (r.norm() > 1e-12) {
          fresh = r / r.norm();
          break;
        }
      }
      if (fresh.size() == 0) fresh = random_unit(dim, rng);
      updated.row(a) = fresh.transpose();
    }
    dict.atoms = std::move(updated);
    coding_pass(false);
  }

  // Reorder atoms by usage so that truncating a code keeps the most used
  // atoms.
  std::vector<int> usage(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index a = 0; a < k; ++a) {
      if (codes(i, a) != 0.0) ++usage[static_cast<std::size_t>(a)];
    }
  }
  std::vector<Eigen::Index> by_usage(static_cast<std::size_t>(k));
  std::iota(by_usage.begin(), by_usage.end(), Eigen::Index{0});
  std::stable_sort(by_usage.begin(), by_usage.end(), [&](Eigen::Index a, Eigen::Index b) {
    return usage[static_cast<std::size_t>(a)] > usage[static_cast<std::size_t>(b)];
  });
  Dictionary sorted{Eigen::MatrixXd(k, dim)};
  for (Eigen::Index a = 0; a < k; ++a) sorted.atoms.row(a) = dict.atoms.row(by_usage[static_cast<std::size_t>(a)]);
  return sorted;
}

}  // namespace contourkit
