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

#ifndef HYPF_COMBINATORICS_HPP_
#define HYPF_COMBINATORICS_HPP_

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypf/product.hpp"

namespace hypf {

// Finite rooted tree with positive edge lengths and the shortest-path
// metric. Node ids are arbitrary comma-free tokens; the root is the unique
// node that never appears as a child.
class MetricTree {
 public:
  struct Edge {
    std::string parent;
    std::string child;
    double length;
  };

  // Empty tree; only meaningful as a target for assignment.
  MetricTree() = default;

  static MetricTree from_edges(const std::vector<Edge>& edges);

  // Text format: optional leading "#tree" header, then one
  // "parent_id,child_id,edge_length" line per edge. Parse errors carry the
  // offending line number.
  static MetricTree parse(std::istream& in);
  static MetricTree load_file(const std::string& path);
  void serialize(std::ostream& out) const;

  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& node_ids() const { return ids_; }
  const std::string& id_of(int node) const { return ids_[static_cast<std::size_t>(node)]; }
  int index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  int root() const { return root_; }
  int parent(int node) const { return parent_[static_cast<std::size_t>(node)]; }
  double parent_edge_length(int node) const { return up_len_[static_cast<std::size_t>(node)]; }
  const std::vector<int>& children(int node) const { return children_[static_cast<std::size_t>(node)]; }

  // Path metric. The id overload validates ids; the int overload assumes
  // valid indices.
  double distance(const std::string& a, const std::string& b) const;
  double distance(int a, int b) const;
  std::vector<double> distances_from(int node) const;

  // Unweighted (hop-count) helpers used by the hierarchical metrics.
  int depth(int node) const { return depth_[static_cast<std::size_t>(node)]; }
  int lowest_common_ancestor(int a, int b) const;
  // Ancestor chain including the node itself, ordered node -> root.
  std::vector<int> ancestors_inclusive(int node) const;

  // Sum of edge lengths from the root, and its maximum over nodes.
  double root_path_length(int node) const { return root_len_[static_cast<std::size_t>(node)]; }
  double max_root_path_length() const;

 private:
  void finalize();

  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> parent_;          // -1 at root
  std::vector<double> up_len_;       // 0 at root
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  std::vector<double> root_len_;
  int root_ = -1;
};

// ----- Boolean lattice over indicator bit vectors -----

using Bits = std::vector<int>;

int hamming(const Bits& s, const Bits& t);

// Entailment order: s entails t (s is the more specific conjunction) iff
// t_i <= s_i for every atomic concept i.
bool lattice_order(const Bits& s, const Bits& t);

Bits meet(const Bits& s, const Bits& t);  // bitwise AND
Bits join(const Bits& s, const Bits& t);  // bitwise OR

// Order-embedding comparison on real vectors: x entails y iff x_i >= y_i
// for all i.
bool order_embedding_leq(const std::vector<double>& x, const std::vector<double>& y);

// Maps an indicator vector into the product space: bit i = 0 goes to the
// origin of factor i, bit i = 1 to the fixed reference point at hyperbolic
// distance `radius` along the first coordinate axis; factors beyond n stay
// at the origin. All factors use curvature 1.
ProductPoint boolean_to_product(const Bits& s, ProductShape shape, double radius);

// All 2^n indicator vectors in lexicographic order (bit 0 fastest).
std::vector<Bits> enumerate_lattice(int n);

}  // namespace hypf

#endif  // HYPF_COMBINATORICS_HPP_
