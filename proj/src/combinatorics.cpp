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
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hypf {

MetricTree MetricTree::from_edges(const std::vector<Edge>& edges) {
  if (edges.empty()) throw InputError("MetricTree: no edges");
  MetricTree t;
  auto intern = [&t](const std::string& id) {
    if (id.empty()) throw InputError("MetricTree: empty node id");
    auto it = t.index_.find(id);
    if (it != t.index_.end()) return it->second;
    int n = static_cast<int>(t.ids_.size());
    t.index_.emplace(id, n);
    t.ids_.push_back(id);
    t.parent_.push_back(-1);
    t.up_len_.push_back(0.0);
    return n;
  };
  for (const auto& e : edges) {
    if (!(e.length > 0.0)) {
      throw InputError("MetricTree: edge " + e.parent + "," + e.child +
                       " has non-positive length");
    }
    int p = intern(e.parent);
    int c = intern(e.child);
    if (p == c) throw InputError("MetricTree: self-loop at " + e.parent);
    if (t.parent_[static_cast<std::size_t>(c)] != -1) {
      throw InputError("MetricTree: node " + e.child + " has two parents");
    }
    t.parent_[static_cast<std::size_t>(c)] = p;
    t.up_len_[static_cast<std::size_t>(c)] = e.length;
  }
  t.finalize();
  return t;
}

void MetricTree::finalize() {
  int n = static_cast<int>(ids_.size());
  root_ = -1;
  for (int v = 0; v < n; ++v) {
    if (parent_[static_cast<std::size_t>(v)] == -1) {
      if (root_ != -1) {
        throw InputError("MetricTree: disconnected (multiple roots: " +
                         ids_[static_cast<std::size_t>(root_)] + ", " +
                         ids_[static_cast<std::size_t>(v)] + ")");
      }
      root_ = v;
    }
  }
  if (root_ == -1) throw InputError("MetricTree: no root (cycle)");
  children_.assign(static_cast<std::size_t>(n), {});
  for (int v = 0; v < n; ++v) {
    if (v != root_) children_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])].push_back(v);
  }
  depth_.assign(static_cast<std::size_t>(n), -1);
  root_len_.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<int> stack{root_};
  depth_[static_cast<std::size_t>(root_)] = 0;
  int seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int c : children_[static_cast<std::size_t>(v)]) {
      depth_[static_cast<std::size_t>(c)] = depth_[static_cast<std::size_t>(v)] + 1;
      root_len_[static_cast<std::size_t>(c)] =
          root_len_[static_cast<std::size_t>(v)] + up_len_[static_cast<std::size_t>(c)];
      stack.push_back(c);
    }
  }
  if (seen != n) throw InputError("MetricTree: cycle detected (unreachable nodes)");
}

MetricTree MetricTree::parse(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = (c1 == std::string::npos) ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw InputError("tree parse error at line " + std::to_string(lineno) +
                       ": expected parent_id,child_id,edge_length");
    }
    Edge e;
    e.parent = line.substr(0, c1);
    e.child = line.substr(c1 + 1, c2 - c1 - 1);
    try {
      std::size_t pos = 0;
      e.length = std::stod(line.substr(c2 + 1), &pos);
      if (pos != line.size() - c2 - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError("tree parse error at line " + std::to_string(lineno) +
                       ": bad edge length");
    }
    edges.push_back(std::move(e));
  }
  if (edges.empty()) throw InputError("tree parse error: no edges found");
  return from_edges(edges);
}

MetricTree MetricTree::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open tree file: " + path);
  return parse(f);
}

void MetricTree::serialize(std::ostream& out) const {
  out << "#tree\n";
  std::ostringstream os;
  os.precision(17);
  for (int v = 0; v < size(); ++v) {
    if (v == root_) continue;
    os.str("");
    os << up_len_[static_cast<std::size_t>(v)];
    out << ids_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])] << ','
        << ids_[static_cast<std::size_t>(v)] << ',' << os.str() << '\n';
  }
}

int MetricTree::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown tree node id: " + id);
  return it->second;
}

double MetricTree::distance(const std::string& a, const std::string& b) const {
  return distance(index_of(a), index_of(b));
}

double MetricTree::distance(int a, int b) const {
  // Walk both nodes up to the LCA, accumulating edge lengths.
  double da = 0.0, db = 0.0;
  int x = a, y = b;
  while (depth_[static_cast<std::size_t>(x)] > depth_[static_cast<std::size_t>(y)]) {
    da += up_len_[static_cast<std::size_t>(x)];
    x = parent_[static_cast<std::size_t>(x)];
  }
  while (depth_[static_cast<std::size_t>(y)] > depth_[static_cast<std::size_t>(x)]) {
    db += up_len_[static_cast<std::size_t>(y)];
    y = parent_[static_cast<std::size_t>(y)];
  }
  while (x != y) {
    da += up_len_[static_cast<std::size_t>(x)];
    db += up_len_[static_cast<std::size_t>(y)];
    x = parent_[static_cast<std::size_t>(x)];
    y = parent_[static_cast<std::size_t>(y)];
  }
  return da + db;
}

std::vector<double> MetricTree::distances_from(int node) const {
  // Single traversal of the tree seen as an undirected graph.
  int n = size();
  std::vector<double> out(static_cast<std::size_t>(n), -1.0);
  std::vector<int> stack{node};
  out[static_cast<std::size_t>(node)] = 0.0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    double dv = out[static_cast<std::size_t>(v)];
    int p = parent_[static_cast<std::size_t>(v)];
    if (p != -1 && out[static_cast<std::size_t>(p)] < 0.0) {
      out[static_cast<std::size_t>(p)] = dv + up_len_[static_cast<std::size_t>(v)];
      stack.push_back(p);
    }
    for (int c : children_[static_cast<std::size_t>(v)]) {
      if (out[static_cast<std::size_t>(c)] < 0.0) {
        out[static_cast<std::size_t>(c)] = dv + up_len_[static_cast<std::size_t>(c)];
        stack.push_back(c);
      }
    }
  }
  return out;
}

int MetricTree::lowest_common_ancestor(int a, int b) const {
  while (depth_[static_cast<std::size_t>(a)] > depth_[static_cast<std::size_t>(b)]) a = parent_[static_cast<std::size_t>(a)];
  while (depth_[static_cast<std::size_t>(b)] > depth_[static_cast<std::size_t>(a)]) b = parent_[static_cast<std::size_t>(b)];
  while (a != b) {
    a = parent_[static_cast<std::size_t>(a)];
    b = parent_[static_cast<std::size_t>(b)];
  }
  return a;
}

std::vector<int> MetricTree::ancestors_inclusive(int node) const {
  std::vector<int> out;
  for (int v = node; v != -1; v = parent_[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

double MetricTree::max_root_path_length() const {
  double m = 0.0;
  for (double v : root_len_) m = std::max(m, v);
  return m;
}

// ----- Boolean lattice -----

namespace {
void check_same_length(const Bits& s, const Bits& t) {
  if (s.size() != t.size()) throw InputError("bit vectors have mismatched lengths");
}
}  // namespace

int hamming(const Bits& s, const Bits& t) {
  check_same_length(s, t);
  int c = 0;
  for (std::size_t i = 0; i < s.size(); ++i) c += (s[i] != t[i]) ? 1 : 0;
  return c;
}

bool lattice_order(const Bits& s, const Bits& t) {
  check_same_length(s, t);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (t[i] > s[i]) return false;
  }
  return true;
}

Bits meet(const Bits& s, const Bits& t) {
  check_same_length(s, t);
  Bits out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] & t[i];
  return out;
}

Bits join(const Bits& s, const Bits& t) {
  check_same_length(s, t);
  Bits out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] | t[i];
  return out;
}

bool order_embedding_leq(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputError("vectors have mismatched lengths");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y[i]) return false;
  }
  return true;
}

ProductPoint boolean_to_product(const Bits& s, ProductShape shape, double radius) {
  int n = static_cast<int>(s.size());
  if (shape.k < n) {
    throw InputError("boolean_to_product: need at least one factor per bit");
  }
  if (!(radius > 0.0)) throw InputError("boolean_to_product: radius must be positive");
  Curvature unit(1.0);
  std::vector<FactorPoint> factors;
  factors.reserve(static_cast<std::size_t>(shape.k));
  for (int i = 0; i < shape.k; ++i) {
    if (i < n && s[static_cast<std::size_t>(i)] != 0) {
      TangentVector v(static_cast<std::size_t>(shape.d), 0.0);
      v[0] = radius;
      factors.push_back(exp0(v, unit));
    } else {
      factors.push_back(FactorPoint::origin(shape.d, unit));
    }
  }
  return ProductPoint(std::move(factors));
}

std::vector<Bits> enumerate_lattice(int n) {
  if (n < 1 || n > 30) throw InputError("enumerate_lattice: n out of range");
  std::vector<Bits> out;
  out.reserve(static_cast<std::size_t>(1) << n);
  for (unsigned m = 0; m < (1u << n); ++m) {
    Bits b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = (m >> i) & 1u;
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace hypf
