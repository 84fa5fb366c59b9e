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

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace hypf {

namespace {

using Real = boost::multiprecision::mpfr_float;  // runtime precision

// Minimal complex arithmetic over Real; std::complex is not specified for
// user-defined scalar types.
struct Cx {
  Real re, im;
};

Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
Cx operator*(const Cx& a, const Cx& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Cx conj(const Cx& a) { return {a.re, -a.im}; }
Real abs_sq(const Cx& a) { return a.re * a.re + a.im * a.im; }
Cx operator/(const Cx& a, const Cx& b) {
  Real d = abs_sq(b);
  Cx n = a * conj(b);
  return {n.re / d, n.im / d};
}

// Disk isometry moving `a` to the origin, and its inverse.
Cx mobius_to_origin(const Cx& z, const Cx& a) {
  Cx one{Real(1), Real(0)};
  return (z - a) / (one - conj(a) * z);
}
Cx mobius_from_origin(const Cx& w, const Cx& a) {
  Cx one{Real(1), Real(0)};
  return (w + a) / (one + conj(a) * w);
}

// Poincare-disk geodesic distance via
//   sinh^2(d/2) = |z1 - z2|^2 / ((1 - |z1|^2)(1 - |z2|^2)),
// which has no cancellation beyond the 1 - |z|^2 factors themselves; the
// working precision is chosen so those retain full relative accuracy.
Real disk_distance(const Cx& z1, const Cx& z2, const Real& sech1, const Real& sech2) {
  Real num = sqrt(abs_sq(z1 - z2));
  Real den = sqrt(sech1 * sech2);
  return 2 * asinh(num / den);
}

struct Placement {
  std::vector<Cx> z;        // disk coordinate per node
  std::vector<Real> sech;   // 1 - |z|^2 per node
};

Placement place_tree(const MetricTree& t, const Real& tau) {
  const Real kPi = 4 * atan(Real(1));
  int n = t.size();
  Placement out;
  out.z.assign(static_cast<std::size_t>(n), Cx{Real(0), Real(0)});
  out.sech.assign(static_cast<std::size_t>(n), Real(1));

  // Iterative preorder; each node places its children inside its free cone.
  std::vector<int> stack{t.root()};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    const auto& kids = t.children(u);
    if (kids.empty()) continue;
    const Cx& zu = out.z[static_cast<std::size_t>(u)];
    int m = static_cast<int>(kids.size());

    // Direction toward the parent after recentering u at the origin; the
    // root has no parent and hands out the full circle.
    Real base(0);
    int slots = m;
    if (u != t.root()) {
      Cx p = mobius_to_origin(out.z[static_cast<std::size_t>(t.parent(u))], zu);
      base = atan2(p.im, p.re);
      slots = m + 1;
    }
    for (int j = 0; j < m; ++j) {
      int c = kids[static_cast<std::size_t>(j)];
      Real theta = base + 2 * kPi * Real(j + (u != t.root() ? 1 : 0)) / Real(slots);
      Real r = tanh(tau * Real(t.parent_edge_length(c)) / 2);
      Cx w{r * cos(theta), r * sin(theta)};
      Cx zc = mobius_from_origin(w, zu);
      out.z[static_cast<std::size_t>(c)] = zc;
      out.sech[static_cast<std::size_t>(c)] = 1 - abs_sq(zc);
      stack.push_back(c);
    }
  }
  return out;
}

unsigned precision_bits_for(double tau, double max_root_path) {
  double bits = 2.886 * tau * max_root_path + 192.0;
  return static_cast<unsigned>(bits);
}

constexpr unsigned kPrecisionCap = 1u << 20;

}  // namespace

double TreeEmbedding::embedded_distance(const std::string& a, const std::string& b) const {
  auto find = [this](const std::string& id) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) return static_cast<int>(i);
    }
    throw InputError("embedded_distance: unknown node id " + id);
  };
  return embedded_distance(find(a), find(b));
}

TreeEmbedding sarkar_embed(const MetricTree& tree, double epsilon, const SarkarOptions& opts) {
  if (!(epsilon > 0.0)) throw InputError("sarkar_embed: epsilon must be positive");
  if (static_cast<std::size_t>(tree.size()) > opts.node_cap) {
    throw InputError("sarkar_embed: tree exceeds node cap of " + std::to_string(opts.node_cap));
  }
  int n = tree.size();

  TreeEmbedding result;
  result.ids = tree.node_ids();

  if (n == 1) {
    result.points.emplace(tree.id_of(0), FactorPoint::origin(2, Curvature(1.0)));
    result.scale.tau = 1.0;
    result.precision_bits = 53;
    result.quality = {1.0, 0.0, {tree.id_of(0), tree.id_of(0)}};
    result.embedded_dist = {0.0};
    return result;
  }

  // Source metric, computed once.
  std::vector<double> tree_dist(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto row = tree.distances_from(i);
    for (int j = 0; j < n; ++j) {
      tree_dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)];
    }
  }
  const double max_path = tree.max_root_path_length();
  const double target = 1.0 + epsilon;

  for (double tau = 1.0; tau <= opts.tau_cap; tau *= 2.0) {
    unsigned bits = precision_bits_for(tau, max_path);
    if (bits > kPrecisionCap) {
      throw ContractError("sarkar_embed: required precision exceeds cap at tau=" +
                          std::to_string(tau));
    }
    boost::multiprecision::mpfr_float::default_precision(
        static_cast<unsigned>(bits / 3.32) + 4);

    Placement pl = place_tree(tree, Real(tau));

    // All-pairs distortion check with early exit.
    bool ok = true;
    std::vector<double> emb(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Real d = disk_distance(pl.z[static_cast<std::size_t>(i)], pl.z[static_cast<std::size_t>(j)],
                               pl.sech[static_cast<std::size_t>(i)], pl.sech[static_cast<std::size_t>(j)]);
        double dd = d.convert_to<double>();
        double ds = tau * tree_dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
        double ratio = std::max(dd / ds, ds / dd);
        if (!(ratio <= target)) {
          ok = false;
          break;
        }
        emb[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = dd;
        emb[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = dd;
      }
    }
    if (!ok) continue;

    // Convert coordinates to Lorentz doubles: x = 2 p / (1 - |p|^2).
    result.points.clear();
    for (int v = 0; v < n; ++v) {
      Real fx = 2 * pl.z[static_cast<std::size_t>(v)].re / pl.sech[static_cast<std::size_t>(v)];
      Real fy = 2 * pl.z[static_cast<std::size_t>(v)].im / pl.sech[static_cast<std::size_t>(v)];
      double cx = fx.convert_to<double>();
      double cy = fy.convert_to<double>();
      if (!std::isfinite(cx) || !std::isfinite(cy)) {
        throw ContractError(
            "sarkar_embed: coordinates exceed double range at node " + tree.id_of(v) +
            "; the scaled tree is too deep to export (tau=" + std::to_string(tau) + ")");
      }
      result.points.emplace(tree.id_of(v), FactorPoint({cx, cy}, Curvature(1.0)));
    }
    result.scale.tau = tau;
    result.precision_bits = static_cast<int>(bits);
    result.embedded_dist = std::move(emb);
    result.quality = measure_distortion(
        n,
        [&](int i, int j) {
          return tau * tree_dist[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
        },
        [&](int i, int j) { return result.embedded_distance(i, j); }, result.ids);
    return result;
  }
  throw ContractError("sarkar_embed: doubling search exhausted tau cap without reaching target distortion");
}

ProductPoint ProductTreeEmbedding::tuple_point(const std::vector<int>& node_per_factor) const {
  if (node_per_factor.size() != factors.size()) {
    throw InputError("tuple_point: one node per factor required");
  }
  std::vector<FactorPoint> fps;
  fps.reserve(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& emb = factors[i];
    const std::string& id = emb.ids[static_cast<std::size_t>(node_per_factor[i])];
    fps.push_back(emb.points.at(id));
  }
  return ProductPoint(std::move(fps));
}

double ProductTreeEmbedding::tuple_distance(const std::vector<int>& a,
                                            const std::vector<int>& b) const {
  if (a.size() != factors.size() || b.size() != factors.size()) {
    throw InputError("tuple_distance: one node per factor required");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    s += factors[i].embedded_distance(a[i], b[i]);
  }
  return s;
}

ProductTreeEmbedding product_tree_embed(const std::vector<MetricTree>& trees,
                                        double epsilon, const SarkarOptions& opts) {
  if (trees.empty()) throw InputError("product_tree_embed: need at least one tree");
  ProductTreeEmbedding out;
  out.factors.reserve(trees.size());
  for (const auto& t : trees) out.factors.push_back(sarkar_embed(t, epsilon, opts));
  return out;
}

// ----- dump format -----

namespace {
std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InputError(std::string("embedding dump: bad ") + what + " list");
    }
  }
  return out;
}
}  // namespace

int EmbeddingDump::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return static_cast<int>(i);
  }
  throw InputError("embedding dump: unknown id " + id);
}

ProductPoint EmbeddingDump::point(int id_index) const {
  std::vector<FactorPoint> fps;
  fps.reserve(static_cast<std::size_t>(shape.k));
  for (int f = 0; f < shape.k; ++f) {
    fps.emplace_back(coords[static_cast<std::size_t>(id_index) * static_cast<std::size_t>(shape.k) + static_cast<std::size_t>(f)],
                     Curvature(alphas[static_cast<std::size_t>(f)]));
  }
  return ProductPoint(std::move(fps));
}

void write_embedding_dump(std::ostream& out, const EmbeddingDump& dump) {
  out.precision(17);
  out << "#embedding k=" << dump.shape.k << " d=" << dump.shape.d << "\n#alpha ";
  for (int i = 0; i < dump.shape.k; ++i) out << (i ? "," : "") << dump.alphas[static_cast<std::size_t>(i)];
  out << "\n#tau ";
  for (int i = 0; i < dump.shape.k; ++i) out << (i ? "," : "") << dump.taus[static_cast<std::size_t>(i)];
  out << "\n";
  for (std::size_t e = 0; e < dump.ids.size(); ++e) {
    for (int f = 0; f < dump.shape.k; ++f) {
      out << dump.ids[e] << ',' << f;
      const auto& c = dump.coords[e * static_cast<std::size_t>(dump.shape.k) + static_cast<std::size_t>(f)];
      for (double v : c) out << ',' << v;
      out << '\n';
    }
  }
}

EmbeddingDump read_embedding_dump(std::istream& in) {
  EmbeddingDump dump;
  std::string line;
  int lineno = 0;
  bool header = false;
  std::unordered_map<std::string, int> index;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#embedding", 0) == 0) {
        int k = 0, d = 0;
        if (std::sscanf(line.c_str(), "#embedding k=%d d=%d", &k, &d) != 2 || k <= 0 || d <= 0) {
          throw InputError("embedding dump: bad header at line " + std::to_string(lineno));
        }
        dump.shape = ProductShape(k, d);
        header = true;
      } else if (line.rfind("#alpha ", 0) == 0) {
        dump.alphas = parse_double_list(line.substr(7), "alpha");
      } else if (line.rfind("#tau ", 0) == 0) {
        dump.taus = parse_double_list(line.substr(5), "tau");
      }
      continue;
    }
    if (!header) throw InputError("embedding dump: missing #embedding header");
    std::stringstream ss(line);
    std::string id, tok;
    if (!std::getline(ss, id, ',') || !std::getline(ss, tok, ',')) {
      throw InputError("embedding dump: malformed line " + std::to_string(lineno));
    }
    int factor = -1;
    try {
      factor = std::stoi(tok);
    } catch (const std::exception&) {
      throw InputError("embedding dump: bad factor index at line " + std::to_string(lineno));
    }
    if (factor < 0 || factor >= dump.shape.k) {
      throw InputError("embedding dump: factor index out of range at line " + std::to_string(lineno));
    }
    std::vector<double> c;
    while (std::getline(ss, tok, ',')) {
      try {
        c.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InputError("embedding dump: bad coordinate at line " + std::to_string(lineno));
      }
    }
    if (static_cast<int>(c.size()) != dump.shape.d) {
      throw InputError("embedding dump: expected " + std::to_string(dump.shape.d) +
                       " coordinates at line " + std::to_string(lineno));
    }
    auto it = index.find(id);
    if (it == index.end()) {
      it = index.emplace(id, static_cast<int>(dump.ids.size())).first;
      dump.ids.push_back(id);
      dump.coords.resize(dump.ids.size() * static_cast<std::size_t>(dump.shape.k));
    }
    dump.coords[static_cast<std::size_t>(it->second) * static_cast<std::size_t>(dump.shape.k) +
                static_cast<std::size_t>(factor)] = std::move(c);
  }
  if (!header) throw InputError("embedding dump: empty input");
  if (dump.alphas.empty()) dump.alphas.assign(static_cast<std::size_t>(dump.shape.k), 1.0);
  if (dump.taus.empty()) dump.taus.assign(static_cast<std::size_t>(dump.shape.k), 1.0);
  if (static_cast<int>(dump.alphas.size()) != dump.shape.k ||
      static_cast<int>(dump.taus.size()) != dump.shape.k) {
    throw InputError("embedding dump: alpha/tau list length does not match k");
  }
  return dump;
}

EmbeddingDump to_dump(const TreeEmbedding& emb) {
  EmbeddingDump dump;
  dump.shape = ProductShape(1, 2);
  dump.alphas = {1.0};
  dump.taus = {emb.scale.tau};
  dump.ids = emb.ids;
  dump.coords.reserve(emb.ids.size());
  for (const auto& id : emb.ids) dump.coords.push_back(emb.points.at(id).space());
  return dump;
}

}  // namespace hypf
