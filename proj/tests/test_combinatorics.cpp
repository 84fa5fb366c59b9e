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

#include "hypf/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "doctest.h"
#include "hypf/rng.hpp"

using namespace hypf;

namespace {

MetricTree random_tree(Rng& rng, int n, double min_len = 0.5, double max_len = 2.0) {
  std::vector<MetricTree::Edge> edges;
  for (int v = 1; v < n; ++v) {
    int p = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(v)));
    edges.push_back({"n" + std::to_string(p), "n" + std::to_string(v),
                     rng.uniform(min_len, max_len)});
  }
  return MetricTree::from_edges(edges);
}

// Brute-force shortest-path oracle over the undirected adjacency, ignoring
// the tree structure the implementation exploits.
std::vector<double> dijkstra_oracle(const MetricTree& t, int src) {
  int n = t.size();
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    if (v == t.root()) continue;
    adj[static_cast<std::size_t>(v)].push_back({t.parent(v), t.parent_edge_length(v)});
    adj[static_cast<std::size_t>(t.parent(v))].push_back({v, t.parent_edge_length(v)});
  }
  std::vector<double> dist(static_cast<std::size_t>(n), 1e300);
  dist[static_cast<std::size_t>(src)] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (auto [u, w] : adj[static_cast<std::size_t>(v)]) {
      if (d + w < dist[static_cast<std::size_t>(u)]) {
        dist[static_cast<std::size_t>(u)] = d + w;
        pq.push({d + w, u});
      }
    }
  }
  return dist;
}

}  // namespace

TEST_SUITE("combinatorics") {

TEST_CASE("path tree distances") {
  auto t = MetricTree::from_edges({{"r", "u", 1.0}, {"u", "v", 1.0}});
  CHECK(t.distance("r", "r") == 0.0);
  CHECK(t.distance("r", "v") == doctest::Approx(2.0));
  CHECK(t.distance("v", "r") == doctest::Approx(2.0));
  CHECK(t.root() == t.index_of("r"));
  CHECK_THROWS_AS(t.distance("r", "zz"), InputError);
}

TEST_CASE("tree distances match a shortest-path oracle") {
  Rng rng(61);
  for (int rep = 0; rep < 20; ++rep) {
    auto t = random_tree(rng, 3 + static_cast<int>(rng.uniform_index(60)));
    for (int i = 0; i < t.size(); ++i) {
      auto oracle = dijkstra_oracle(t, i);
      auto fast = t.distances_from(i);
      for (int j = 0; j < t.size(); ++j) {
        CHECK(t.distance(i, j) == doctest::Approx(oracle[static_cast<std::size_t>(j)]).epsilon(1e-12));
        CHECK(fast[static_cast<std::size_t>(j)] == doctest::Approx(oracle[static_cast<std::size_t>(j)]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("tree metric satisfies the four-point condition") {
  Rng rng(67);
  auto t = random_tree(rng, 40);
  for (int rep = 0; rep < 500; ++rep) {
    int a = static_cast<int>(rng.uniform_index(40));
    int b = static_cast<int>(rng.uniform_index(40));
    int c = static_cast<int>(rng.uniform_index(40));
    int e = static_cast<int>(rng.uniform_index(40));
    double s1 = t.distance(a, b) + t.distance(c, e);
    double s2 = t.distance(a, c) + t.distance(b, e);
    double s3 = t.distance(a, e) + t.distance(b, c);
    CHECK(s1 <= std::max(s2, s3) + 1e-9);
  }
}

TEST_CASE("tree structure validation") {
  CHECK_THROWS_AS(MetricTree::from_edges({{"a", "b", 0.0}}), InputError);
  CHECK_THROWS_AS(MetricTree::from_edges({{"a", "b", 1.0}, {"c", "b", 1.0}}), InputError);
  CHECK_THROWS_AS(MetricTree::from_edges({{"a", "b", 1.0}, {"c", "d", 1.0}}), InputError);
  CHECK_THROWS_AS(MetricTree::from_edges({{"a", "b", 1.0}, {"b", "a", 1.0}}), InputError);
  CHECK_THROWS_AS(MetricTree::from_edges({}), InputError);
}

TEST_CASE("tree file format round-trips and reports parse errors") {
  Rng rng(71);
  auto t = random_tree(rng, 25);
  std::ostringstream out;
  t.serialize(out);
  CHECK(out.str().rfind("#tree\n", 0) == 0);
  std::istringstream in(out.str());
  auto t2 = MetricTree::parse(in);
  REQUIRE(t2.size() == t.size());
  for (int i = 0; i < t.size(); ++i) {
    for (int j = 0; j < t.size(); ++j) {
      CHECK(t2.distance(t.id_of(i), t.id_of(j)) == doctest::Approx(t.distance(i, j)));
    }
  }

  std::istringstream bad("#tree\na,b,1.0\nbogus line\n");
  try {
    MetricTree::parse(bad);
    FAIL("expected parse error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream bad_len("#tree\na,b,notanumber\n");
  CHECK_THROWS_AS(MetricTree::parse(bad_len), InputError);
}

TEST_CASE("hamming distance") {
  CHECK(hamming({0, 1, 1}, {0, 1, 1}) == 0);
  CHECK(hamming({0, 1, 1}, {1, 1, 0}) == 2);
  Rng rng(73);
  for (int rep = 0; rep < 100; ++rep) {
    Bits s(6), t(6);
    for (auto& b : s) b = static_cast<int>(rng.uniform_index(2));
    for (auto& b : t) b = static_cast<int>(rng.uniform_index(2));
    CHECK(hamming(s, t) == hamming(t, s));
    // Hamming equals the l1 norm of the difference.
    int l1 = 0;
    for (int i = 0; i < 6; ++i) l1 += std::abs(s[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i)]);
    CHECK(hamming(s, t) == l1);
  }
  CHECK_THROWS_AS(hamming({0, 1}, {0, 1, 1}), InputError);
}

TEST_CASE("lattice order") {
  // {dog, car} entails {dog}: the superset is the more specific element.
  Bits dog_car{1, 1}, dog{1, 0}, car{0, 1};
  CHECK(lattice_order(dog_car, dog));
  CHECK(lattice_order(dog_car, car));
  CHECK_FALSE(lattice_order(dog, dog_car));
  CHECK(lattice_order(dog, dog));
  CHECK_FALSE(lattice_order({0, 1}, {1, 0}));
  CHECK_FALSE(lattice_order({1, 0}, {0, 1}));
}

TEST_CASE("meet and join") {
  Bits s{0, 1, 1}, t{1, 1, 0};
  CHECK(meet(s, t) == Bits{0, 1, 0});
  CHECK(join(s, t) == Bits{1, 1, 1});
  CHECK(meet(s, s) == s);
  CHECK(join(s, s) == s);
  CHECK(join(s, meet(s, t)) == s);  // absorption
  CHECK(meet(s, join(s, t)) == s);
}

TEST_CASE("order embedding comparison") {
  CHECK(order_embedding_leq({2.0, 3.0}, {1.0, 3.0}));
  CHECK_FALSE(order_embedding_leq({1.0, 3.0}, {2.0, 3.0}));
  CHECK(order_embedding_leq({1.0, 2.0}, {1.0, 2.0}));
  // x entails y iff the coordinate-wise max equals x.
  Rng rng(79);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(4), y(4), mx(4);
    for (int i = 0; i < 4; ++i) {
      x[static_cast<std::size_t>(i)] = rng.uniform(-2, 2);
      y[static_cast<std::size_t>(i)] = rng.uniform(-2, 2);
      mx[static_cast<std::size_t>(i)] = std::max(x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]);
    }
    CHECK(order_embedding_leq(x, y) == (mx == x));
  }
}

TEST_CASE("boolean lattice / order embedding duality") {
  for (int n = 2; n <= 6; ++n) {
    auto elems = enumerate_lattice(n);
    for (const auto& s : elems) {
      for (const auto& t : elems) {
        std::vector<double> cs(static_cast<std::size_t>(n)), ct(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          cs[static_cast<std::size_t>(i)] = 1.0 - s[static_cast<std::size_t>(i)];
          ct[static_cast<std::size_t>(i)] = 1.0 - t[static_cast<std::size_t>(i)];
        }
        CHECK(lattice_order(s, t) == order_embedding_leq(ct, cs));
      }
    }
  }
}

TEST_CASE("boolean_to_product embeds the Hamming cube isometrically") {
  SUBCASE("all-zero maps to all origins") {
    auto p = boolean_to_product({0, 0}, ProductShape(3, 2), 1.0);
    CHECK(l1_distance(p, p) == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(p.factor(i).space_norm() == 0.0);
  }
  SUBCASE("two opposite bits are two apart") {
    auto x = boolean_to_product({1, 0}, ProductShape(2, 2), 1.0);
    auto y = boolean_to_product({0, 1}, ProductShape(2, 2), 1.0);
    CHECK(l1_distance(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("exhaustive n=4 isometry") {
    auto elems = enumerate_lattice(4);
    ProductShape shape(5, 2);  // one spare factor stays at the origin
    std::vector<ProductPoint> pts;
    for (const auto& e : elems) pts.push_back(boolean_to_product(e, shape, 1.0));
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j < elems.size(); ++j) {
        CHECK(std::abs(l1_distance(pts[i], pts[j]) - hamming(elems[i], elems[j])) <= 1e-9);
      }
    }
  }
  SUBCASE("k < n is rejected") {
    CHECK_THROWS_AS(boolean_to_product({1, 0, 1}, ProductShape(2, 2), 1.0), InputError);
  }
}

}  // TEST_SUITE
