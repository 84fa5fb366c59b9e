// Copyright 2026 The hypf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hypf/distortion.hpp"

#include <cmath>

#include "doctest.h"
#include "hypf/combinatorics.hpp"
#include "hypf/lorentz.hpp"
#include "hypf/rng.hpp"

using namespace hypf;

TEST_SUITE("distortion") {

TEST_CASE("identity map has lambda 1") {
  std::vector<std::string> ids{"a", "b", "c"};
  std::vector<double> d{0, 1, 2, 1, 0, 1.5, 2, 1.5, 0};
  auto m = [&d](int i, int j) { return d[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(j)]; };
  auto q = measure_distortion(3, m, m, ids);
  CHECK(q.lambda == doctest::Approx(1.0));
  CHECK(q.additive_c == 0.0);
}

TEST_CASE("uniform doubling gives lambda 2") {
  std::vector<std::string> ids{"a", "b", "c"};
  std::vector<double> d{0, 1, 2, 1, 0, 1.5, 2, 1.5, 0};
  auto src = [&d](int i, int j) { return d[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(j)]; };
  auto tgt = [&d](int i, int j) { return 2.0 * d[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(j)]; };
  auto q = measure_distortion(3, src, tgt, ids);
  CHECK(q.lambda == doctest::Approx(2.0));
  // All pairs tie at lambda = 2; the lexicographically smallest id pair wins.
  CHECK(q.worst_pair == std::make_pair(std::string("a"), std::string("b")));
}

TEST_CASE("non-injective targets are rejected") {
  std::vector<std::string> ids{"a", "b"};
  auto src = [](int, int) { return 1.0; };
  auto tgt = [](int, int) { return 0.0; };
  CHECK_THROWS_AS(measure_distortion(2, src, tgt, ids), InputError);
  CHECK_THROWS_AS(measure_distortion(1, src, src, {"a"}), InputError);
}

TEST_CASE("worst pair is reported") {
  std::vector<std::string> ids{"a", "b", "c"};
  std::vector<double> s{0, 1, 1, 1, 0, 1, 1, 1, 0};
  std::vector<double> t{0, 1, 1, 1, 0, 3, 1, 3, 0};
  auto src = [&s](int i, int j) { return s[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(j)]; };
  auto tgt = [&t](int i, int j) { return t[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(j)]; };
  auto q = measure_distortion(3, src, tgt, ids);
  CHECK(q.lambda == doctest::Approx(3.0));
  CHECK(q.worst_pair == std::make_pair(std::string("b"), std::string("c")));
}

TEST_CASE("boolean_to_product images have lambda 1 against hamming (n=4)") {
  auto elems = enumerate_lattice(4);
  ProductShape shape(4, 2);
  std::vector<ProductPoint> pts;
  std::vector<std::string> ids;
  for (const auto& e : elems) {
    pts.push_back(boolean_to_product(e, shape, 1.0));
    std::string id;
    for (int b : e) id += static_cast<char>('0' + b);
    ids.push_back(id);
  }
  auto src = [&elems](int i, int j) {
    return static_cast<double>(hamming(elems[static_cast<std::size_t>(i)], elems[static_cast<std::size_t>(j)]));
  };
  auto tgt = [&pts](int i, int j) {
    return l1_distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
  };
  auto q = measure_distortion(static_cast<int>(elems.size()), src, tgt, ids);
  CHECK(std::abs(q.lambda - 1.0) <= 1e-9);
}

TEST_CASE("tree metrics are exactly 0-hyperbolic") {
  Rng rng(97);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 5 + static_cast<int>(rng.uniform_index(40));
    std::vector<MetricTree::Edge> edges;
    // Dyadic edge lengths keep the path sums exact in binary floating point.
    const double lens[3] = {0.5, 1.0, 2.0};
    for (int v = 1; v < n; ++v) {
      int p = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(v)));
      edges.push_back({"n" + std::to_string(p), "n" + std::to_string(v),
                       lens[rng.uniform_index(3)]});
    }
    auto t = MetricTree::from_edges(edges);
    std::vector<double> dist(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto row = t.distances_from(i);
      for (int j = 0; j < n; ++j) dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)];
    }
    CHECK(gromov_delta(dist, n) == 0.0);
  }
}

TEST_CASE("fewer than four points give delta 0") {
  CHECK(gromov_delta(std::vector<double>(9, 0.0), 3) == 0.0);
}

TEST_CASE("hyperbolic plane samples have bounded delta") {
  Rng rng(101);
  int n = 200;
  std::vector<FactorPoint> pts;
  for (int i = 0; i < n; ++i) {
    double r = rng.uniform(0.0, 10.0);
    double a = rng.uniform(0.0, 2.0 * M_PI);
    pts.push_back(exp0(TangentVector{r * std::cos(a), r * std::sin(a)}, Curvature(1.0)));
  }
  std::vector<double> dist(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    }
  }
  CHECK(gromov_delta(dist, n) <= 1.0);
}

TEST_CASE("grid of two path trees: delta grows with size") {
  // 4x4 grid: corners give defect (8 - 4)/2... delta = m - 1 for the l1 grid.
  auto d4 = grid_l1_distance_matrix(4);
  CHECK(gromov_delta(d4, 16) == doctest::Approx(3.0));
  auto d6 = grid_l1_distance_matrix(6);
  CHECK(gromov_delta(d6, 36) == doctest::Approx(5.0));
  CHECK(gromov_delta(d6, 36) > gromov_delta(d4, 16));
}

}  // TEST_SUITE
