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

#ifndef HYPF_SARKAR_HPP_
#define HYPF_SARKAR_HPP_

#include <string>
#include <unordered_map>
#include <vector>

#include "hypf/combinatorics.hpp"
#include "hypf/distortion.hpp"
#include "hypf/lorentz.hpp"
#include "hypf/product.hpp"

namespace hypf {

// Pre-embedding scale applied to the tree metric before placement.
struct ScaleFactor {
  double tau = 1.0;
};

struct SarkarOptions {
  std::size_t node_cap = 10000;
  double tau_cap = 1073741824.0;  // doubling search aborts beyond 2^30
};

// A low-distortion embedding of one metric tree into the hyperbolic plane
// (curvature -1, d = 2). The construction runs in arbitrary-precision
// arithmetic because deep placements need ~r*log2(e) bits; the exported
// coordinates are rounded to double, while `embedded_dist` holds the
// authoritative full-precision pairwise distances (rounded only at the end),
// indexed like the tree's node order.
struct TreeEmbedding {
  std::unordered_map<std::string, FactorPoint> points;
  ScaleFactor scale;
  int precision_bits = 0;
  EmbeddingQuality quality;        // measured against the tau-scaled tree metric
  std::vector<std::string> ids;    // node ids in tree index order
  std::vector<double> embedded_dist;  // n x n

  double embedded_distance(const std::string& a, const std::string& b) const;
  double embedded_distance(int a, int b) const {
    return embedded_dist[static_cast<std::size_t>(a) * ids.size() + static_cast<std::size_t>(b)];
  }
};

// Sarkar-style cone-splitting construction. Places the root at the origin
// and every child inside its own angular sub-cone of the parent's free cone
// at hyperbolic distance tau * edge_length; tau is found by doubling from 1
// until the measured all-pairs distortion drops to 1 + epsilon.
TreeEmbedding sarkar_embed(const MetricTree& tree, double epsilon,
                           const SarkarOptions& opts = {});

// Per-factor Sarkar embeddings of k trees; the l1-product of the scaled tree
// metrics maps into the l1-product of the factors with distortion
// max_i lambda_i.
struct ProductTreeEmbedding {
  std::vector<TreeEmbedding> factors;

  int k() const { return static_cast<int>(factors.size()); }
  // Product point for the tuple (one node index per factor).
  ProductPoint tuple_point(const std::vector<int>& node_per_factor) const;
  // l1 distance between two tuples in the embedded product space.
  double tuple_distance(const std::vector<int>& a, const std::vector<int>& b) const;
};

ProductTreeEmbedding product_tree_embed(const std::vector<MetricTree>& trees,
                                        double epsilon, const SarkarOptions& opts = {});

// ----- embedding dump text format -----
//
//   #embedding k=<k> d=<d>
//   #alpha a_1,...,a_k
//   #tau t_1,...,t_k
//   id,factor_index,coord_0,...,coord_{d-1}
struct EmbeddingDump {
  ProductShape shape{1, 2};
  std::vector<double> alphas;
  std::vector<double> taus;
  std::vector<std::string> ids;
  // coords[id_index * k + factor] = space coordinates (length d)
  std::vector<std::vector<double>> coords;

  int index_of(const std::string& id) const;
  ProductPoint point(int id_index) const;
};

void write_embedding_dump(std::ostream& out, const EmbeddingDump& dump);
EmbeddingDump read_embedding_dump(std::istream& in);
EmbeddingDump to_dump(const TreeEmbedding& emb);

}  // namespace hypf

#endif  // HYPF_SARKAR_HPP_
