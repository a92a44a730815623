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
#include <cmath>
#include <numbers>
#include <random>

#include "contourkit/signatures.hpp"
#include "doctest.h"

using namespace contourkit;

namespace {

Dictionary random_dictionary(std::mt19937_64& rng, int k, int len) {
  std::normal_distribution<double> n;
  Dictionary d;
  d.atoms.resize(k, len);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < len; ++c) d.atoms(r, c) = n(rng);
    d.atoms.row(r).normalize();
  }
  return d;
}

std::vector<CoordSignature> random_corpus(std::mt19937_64& rng, int count, int m) {
  std::normal_distribution<double> n;
  std::vector<CoordSignature> out;
  for (int i = 0; i < count; ++i) {
    Eigen::MatrixX2d v(m, 2);
    const double a = n(rng), b = n(rng);
    for (int p = 0; p < m; ++p) {
      const double t = 2.0 * std::numbers::pi * p / m;
      v.row(p) << 0.4 * std::cos(t) + 0.1 * a * std::cos(2 * t) + 0.01 * n(rng),
          0.4 * std::sin(t) + 0.1 * b * std::sin(3 * t) + 0.01 * n(rng);
    }
    out.push_back(CoordSignature{v});
  }
  return out;
}

}  // namespace

TEST_CASE("omp recovers a sparse combination exactly") {
  std::mt19937_64 rng(1);
  const Dictionary d = random_dictionary(rng, 30, 40);
  const Eigen::VectorXd target = 1.5 * d.atoms.row(4).transpose() - 0.7 * d.atoms.row(17).transpose() +
                                 0.2 * d.atoms.row(25).transpose();
  const DictSignature s = omp_encode(target, d, 3);
  CHECK(s.coeffs.size() == 30);
  CHECK(s.coeffs(4) == doctest::Approx(1.5));
  CHECK(s.coeffs(17) == doctest::Approx(-0.7));
  CHECK(s.coeffs(25) == doctest::Approx(0.2));
  CHECK((s.coeffs.array() != 0.0).count() == 3);
  const CoordSignature back = dict_decode(s, d);
  CHECK((flatten_signature(back) - target).norm() < 1e-10);
}

TEST_CASE("omp respects sparsity and shrinks the residual") {
  std::mt19937_64 rng(2);
  const Dictionary d = random_dictionary(rng, 50, 32);
  std::normal_distribution<double> n;
  Eigen::VectorXd target(32);
  for (auto& v : target) v = n(rng);
  double prev = target.norm();
  for (int s = 1; s <= 10; ++s) {
    const DictSignature code = omp_encode(target, d, s);
    CHECK((code.coeffs.array() != 0.0).count() <= s);
    const double res = (flatten_signature(dict_decode(code, d)) - target).norm();
    CHECK(res <= prev + 1e-12);
    prev = res;
  }
}

TEST_CASE("omp input validation") {
  std::mt19937_64 rng(3);
  const Dictionary d = random_dictionary(rng, 4, 6);
  CHECK_THROWS(omp_encode(Eigen::VectorXd::Ones(5), d, 1));
  CHECK_THROWS(omp_encode(Eigen::VectorXd::Ones(6), d, 0));
}

TEST_CASE("dictionary learning never increases the training error") {
  std::mt19937_64 rng(4);
  const auto corpus = random_corpus(rng, 60, 16);
  DictionaryOptions opt;
  opt.atoms = 12;
  opt.sparsity = 3;
  opt.iterations = 15;
  opt.seed = 9;
  std::vector<double> trace;
  const Dictionary d = learn_dictionary(corpus, opt, &trace);
  CHECK(d.atom_count() == 12);
  CHECK(d.atom_length() == 32);
  REQUIRE(trace.size() == 16);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] * (1 + 1e-12));
  for (int r = 0; r < d.atom_count(); ++r) CHECK(d.atoms.row(r).norm() == doctest::Approx(1.0));

  std::vector<double> again;
  const Dictionary d2 = learn_dictionary(corpus, opt, &again);
  CHECK(d2.atoms == d.atoms);
  CHECK(again == trace);
}

TEST_CASE("dictionary learning rejects bad options") {
  std::mt19937_64 rng(5);
  const auto corpus = random_corpus(rng, 5, 8);
  DictionaryOptions opt;
  opt.atoms = 0;
  CHECK_THROWS(learn_dictionary(corpus, opt));
  CHECK_THROWS(learn_dictionary({}, DictionaryOptions{}));
}
