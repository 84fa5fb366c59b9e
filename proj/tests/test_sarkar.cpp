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

#include "hypf/sarkar.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hypf/rng.hpp"

using namespace hypf;

namespace {
MetricTree random_tree(Rng& rng, int n) {
  std::vector<MetricTree::Edge> edges;
  for (int v = 1; v < n; ++v) {
    int p = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(v)));
    edges.push_back({"n" + std::to_string(p), "n" + std::to_string(v), rng.uniform(0.5, 2.0)});
  }
  return MetricTree::from_edges(edges);
}
}  // namespace

TEST_SUITE("sarkar") {

TEST_CASE("a single edge embeds isometrically at tau = 1") {
  auto t = MetricTree::from_edges({{"a", "b", 1.0}});
  auto emb = sarkar_embed(t, 0.1);
  CHECK(emb.scale.tau == doctest::Approx(1.0));
  CHECK(emb.quality.lambda <= 1.0 + 1e-12);
  CHECK(emb.embedded_distance("a", "b") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("path of three unit edges stays within 1.1 distortion") {
  auto t = MetricTree::from_edges({{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "d", 1.0}});
  auto emb = sarkar_embed(t, 0.1);
  CHECK(emb.quality.lambda <= 1.1);
  // Paths embed along a geodesic, so even tau = 1 is exact.
  CHECK(emb.scale.tau == doctest::Approx(1.0));
  CHECK(emb.quality.lambda <= 1.0 + 1e-9);
}

TEST_CASE("star with 50 unit leaves stays within 1.1 distortion") {
  std::vector<MetricTree::Edge> edges;
  for (int i = 0; i < 50; ++i) {
    edges.push_back({"hub", "leaf" + std::to_string(i), 1.0});
  }
  auto t = MetricTree::from_edges(edges);
  auto emb = sarkar_embed(t, 0.1);
  CHECK(emb.quality.lambda <= 1.1);
  // The angular packing forces a larger scale than the trivial one.
  CHECK(emb.scale.tau > 1.0);
}

TEST_CASE("exported double coordinates agree with the internal distances on shallow trees") {
  auto t = MetricTree::from_edges({{"a", "b", 1.0}, {"a", "c", 0.5}, {"c", "d", 2.0}});
  auto emb = sarkar_embed(t, 0.1);
  for (int i = 0; i < t.size(); ++i) {
    for (int j = i + 1; j < t.size(); ++j) {
      double via_points =
          distance(emb.points.at(t.id_of(i)), emb.points.at(t.id_of(j)));
      CHECK(via_points == doctest::Approx(emb.embedded_distance(i, j)).epsilon(1e-9));
    }
  }
}

TEST_CASE("random trees meet the distortion target") {
  Rng rng(103);
  for (int rep = 0; rep < 8; ++rep) {
    auto t = random_tree(rng, 10 + static_cast<int>(rng.uniform_index(50)));
    auto emb = sarkar_embed(t, 0.1);
    CHECK(emb.quality.lambda <= 1.1);
    CHECK(emb.points.size() == static_cast<std::size_t>(t.size()));
  }
}

TEST_CASE("input validation") {
  auto t = MetricTree::from_edges({{"a", "b", 1.0}});
  CHECK_THROWS_AS(sarkar_embed(t, 0.0), InputError);
  CHECK_THROWS_AS(sarkar_embed(t, -1.0), InputError);
  SarkarOptions opts;
  opts.node_cap = 1;
  CHECK_THROWS_AS(sarkar_embed(t, 0.1, opts), InputError);
}

TEST_CASE("product of one tree reduces to the single embedding") {
  Rng rng(107);
  auto t = random_tree(rng, 20);
  auto single = sarkar_embed(t, 0.1);
  auto prod = product_tree_embed({t}, 0.1);
  REQUIRE(prod.k() == 1);
  CHECK(prod.factors[0].scale.tau == doctest::Approx(single.scale.tau));
  for (int i = 0; i < t.size(); ++i) {
    for (int j = 0; j < t.size(); ++j) {
      CHECK(prod.tuple_distance({i}, {j}) ==
            doctest::Approx(single.embedded_distance(i, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("product of two paths: exhaustive distortion and composition law") {
  auto p1 = MetricTree::from_edges({{"a", "b", 1.0}, {"b", "c", 1.0}});
  auto p2 = MetricTree::from_edges({{"x", "y", 1.0}, {"y", "z", 1.0}});
  auto prod = product_tree_embed({p1, p2}, 0.1);
  REQUIRE(prod.k() == 2);
  double max_factor_lambda =
      std::max(prod.factors[0].quality.lambda, prod.factors[1].quality.lambda);

  double worst = 1.0;
  for (int a1 = 0; a1 < 3; ++a1)
    for (int a2 = 0; a2 < 3; ++a2)
      for (int b1 = 0; b1 < 3; ++b1)
        for (int b2 = 0; b2 < 3; ++b2) {
          if (a1 == b1 && a2 == b2) continue;
          double src = prod.factors[0].scale.tau * p1.distance(a1, b1) +
                       prod.factors[1].scale.tau * p2.distance(a2, b2);
          double tgt = prod.tuple_distance({a1, a2}, {b1, b2});
          double ratio = std::max(src / tgt, tgt / src);
          worst = std::max(worst, ratio);
        }
  CHECK(worst <= 1.1);
  CHECK(worst <= max_factor_lambda + 1e-9);

  // Tuple points assemble into valid product points.
  auto pp = prod.tuple_point({1, 2});
  CHECK(pp.k() == 2);
  CHECK(pp.d() == 2);
}

TEST_CASE("embedding dump round-trips") {
  Rng rng(109);
  auto t = random_tree(rng, 12);
  auto emb = sarkar_embed(t, 0.1);
  auto dump = to_dump(emb);
  std::ostringstream out;
  write_embedding_dump(out, dump);
  std::istringstream in(out.str());
  auto back = read_embedding_dump(in);
  REQUIRE(back.ids.size() == dump.ids.size());
  CHECK(back.shape.k == 1);
  CHECK(back.shape.d == 2);
  CHECK(back.taus[0] == doctest::Approx(emb.scale.tau));
  for (std::size_t i = 0; i < dump.ids.size(); ++i) {
    CHECK(back.ids[i] == dump.ids[i]);
    for (int c = 0; c < 2; ++c) {
      CHECK(back.coords[i][static_cast<std::size_t>(c)] ==
            doctest::Approx(dump.coords[i][static_cast<std::size_t>(c)]).epsilon(1e-15));
    }
  }

  std::istringstream bad("id,0,1.0,2.0\n");
  CHECK_THROWS_AS(read_embedding_dump(bad), InputError);
}

}  // TEST_SUITE
