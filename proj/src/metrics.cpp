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

#include "hypf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

#include "hypf/cones.hpp"
#include "hypf/train.hpp"

namespace hypf {

using nlohmann::json;

double recall_at_k(std::span<const ProductPoint> queries,
                   std::span<const ProductPoint> candidates,
                   std::span<const int> paired, int k, ProductMetric metric) {
  if (queries.empty()) throw InputError("recall_at_k: no queries");
  if (paired.size() != queries.size()) throw InputError("recall_at_k: paired size mismatch");
  if (k < 1) throw InputError("recall_at_k: k must be positive");
  const int nc = static_cast<int>(candidates.size());
  for (int p : paired) {
    if (p < 0 || p >= nc) throw InputError("recall_at_k: paired index out of range");
  }
  auto dm = avg_distance_matrix(queries, candidates, metric);
  int hits = 0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const double* row = dm.data() + q * static_cast<std::size_t>(nc);
    int p = paired[q];
    double dp = row[p];
    int rank = 0;
    for (int c = 0; c < nc; ++c) {
      if (row[c] < dp || (row[c] == dp && c < p)) ++rank;
    }
    if (rank < k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(queries.size());
}

HierMetrics hierarchical_metrics(const std::string& pred, const std::string& truth,
                                 const MetricTree& taxonomy) {
  int p = taxonomy.index_of(pred);
  int t = taxonomy.index_of(truth);
  int lca = taxonomy.lowest_common_ancestor(p, t);
  HierMetrics m;
  int dp = taxonomy.depth(p) - taxonomy.depth(lca);
  int dt = taxonomy.depth(t) - taxonomy.depth(lca);
  m.tie = dp + dt;
  m.lca = std::max(dp, dt);
  auto ap = taxonomy.ancestors_inclusive(p);
  auto at = taxonomy.ancestors_inclusive(t);
  std::set<int> sp(ap.begin(), ap.end()), st(at.begin(), at.end());
  int inter = 0;
  for (int v : sp) inter += st.count(v) ? 1 : 0;
  int uni = static_cast<int>(sp.size() + st.size()) - inter;
  m.jaccard = static_cast<double>(inter) / uni;
  m.p_h = static_cast<double>(inter) / static_cast<double>(sp.size());
  m.r_h = static_cast<double>(inter) / static_cast<double>(st.size());
  return m;
}

namespace {
double factor_norm(const FactorPoint& f) {
  return std::asinh(std::sqrt(f.alpha()) * f.space_norm()) / std::sqrt(f.alpha());
}

double overall_norm(const ProductPoint& p) {
  double s = 0.0;
  for (int i = 0; i < p.k(); ++i) s += factor_norm(p.factor(i));
  return s;
}
}  // namespace

std::map<std::string, RoleNormStats> norm_stats(const EmbeddingTable& table,
                                                const TrainScalars& scalars, int bins) {
  if (bins < 1) throw InputError("norm_stats: bins must be positive");
  const int k = table.shape().k;
  std::map<std::string, std::vector<double>> norms;
  std::map<std::string, std::vector<double>> factor_sums;
  for (int e = 0; e < table.size(); ++e) {
    ProductPoint p = table.lift(e, scalars);
    std::string role = role_name(table.role(e));
    auto& fs = factor_sums[role];
    if (fs.empty()) fs.assign(static_cast<std::size_t>(k), 0.0);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      double fn = factor_norm(p.factor(i));
      fs[static_cast<std::size_t>(i)] += fn;
      total += fn;
    }
    norms[role].push_back(total);
  }
  std::map<std::string, RoleNormStats> out;
  for (auto& [role, values] : norms) {
    RoleNormStats s;
    s.count = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.count;
    double var = 0.0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.stddev = (s.count > 1) ? std::sqrt(var / (s.count - 1)) : 0.0;
    s.per_factor_mean.assign(static_cast<std::size_t>(k), 0.0);
    for (int i = 0; i < k; ++i) {
      s.per_factor_mean[static_cast<std::size_t>(i)] =
          factor_sums[role][static_cast<std::size_t>(i)] / s.count;
    }
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi <= lo) hi = lo + 1.0;
    s.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) {
      s.bin_edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    }
    s.bin_counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
      int b = static_cast<int>((v - lo) / (hi - lo) * bins);
      if (b >= bins) b = bins - 1;
      if (b < 0) b = 0;
      ++s.bin_counts[static_cast<std::size_t>(b)];
    }
    out.emplace(role, std::move(s));
  }
  return out;
}

ActivationProfile activation_profile(const EmbeddingTable& table, const TrainScalars& scalars,
                                     const std::map<std::string, std::vector<int>>& grouping) {
  if (grouping.empty()) throw InputError("activation_profile: no groups");
  const int k = table.shape().k;
  ActivationProfile out;
  for (const auto& [group, members] : grouping) {
    if (members.empty()) throw InputError("activation_profile: empty group " + group);
    std::vector<double> means(static_cast<std::size_t>(k), 0.0);
    for (int e : members) {
      ProductPoint p = table.lift(e, scalars);
      for (int i = 0; i < k; ++i) means[static_cast<std::size_t>(i)] += factor_norm(p.factor(i));
    }
    for (double& m : means) m /= static_cast<double>(members.size());
    int arg = 0;
    for (int i = 1; i < k; ++i) {
      if (means[static_cast<std::size_t>(i)] > means[static_cast<std::size_t>(arg)]) arg = i;
    }
    out.factor_means.emplace(group, std::move(means));
    out.argmax_factor.emplace(group, arg);
  }
  int unique = 0;
  for (const auto& [group, arg] : out.argmax_factor) {
    bool shared = false;
    for (const auto& [other, arg2] : out.argmax_factor) {
      if (other != group && arg2 == arg) {
        shared = true;
        break;
      }
    }
    if (!shared) ++unique;
  }
  out.specialization_purity = static_cast<double>(unique) / out.argmax_factor.size();
  return out;
}

ProductPoint compose_max(const ProductPoint& x, const ProductPoint& y) {
  detail::check_shapes(x, y);
  std::vector<FactorPoint> factors;
  factors.reserve(static_cast<std::size_t>(x.k()));
  for (int i = 0; i < x.k(); ++i) {
    // Same curvature per factor, so comparing space norms orders the
    // hyperbolic norms; ties keep the first argument.
    if (y.factor(i).space_norm() > x.factor(i).space_norm()) {
      factors.push_back(y.factor(i));
    } else {
      factors.push_back(x.factor(i));
    }
  }
  return ProductPoint(std::move(factors));
}

namespace {

// Per-pair cone test at threshold eta * omega; eta = 1 is strict
// containment, the trained margins use eta_inter/eta_intra. Apex-degenerate
// or coincident factors count as inside (their cone is the widest possible).
bool pair_contained(const ProductPoint& specific, const ProductPoint& general,
                    ConeParams cone, double eta) {
  for (int i = 0; i < specific.k(); ++i) {
    const auto& x = specific.factor(i);
    const auto& y = general.factor(i);
    if (y.space_norm() <= 1e-8) continue;
    if (detail::sinh_sq_half_dist(x, y) <= 1e-12) continue;
    if (!(exterior_angle(x, y) < eta * half_aperture(y, cone))) return false;
  }
  return true;
}

}  // namespace

MetricsReport evaluate(const Dataset& ds, const EmbeddingTable& table,
                       const TrainScalars& scalars, const EntityLayout& layout,
                       const EvalOptions& opts) {
  const int n = static_cast<int>(ds.instances.size());
  const int ne = std::min(opts.eval_instances, n);
  MetricsReport rep;

  // Retrieval text -> image over the evaluation subset (the trailing ne
  // instances).
  {
    std::vector<ProductPoint> queries, candidates;
    std::vector<int> paired;
    for (int i = n - ne; i < n; ++i) {
      queries.push_back(table.lift(layout.text[static_cast<std::size_t>(i)], scalars));
      candidates.push_back(table.lift(layout.image[static_cast<std::size_t>(i)], scalars));
      paired.push_back(static_cast<int>(paired.size()));
    }
    for (int k : opts.recall_ks) {
      rep.recall_at[k] = recall_at_k(queries, candidates, paired, k, opts.metric);
    }
  }

  // Hierarchical classification: each evaluation image box predicts the
  // concept node of its nearest text box (any instance), scored against its
  // own text-level concept on that family's taxonomy.
  {
    std::vector<ProductPoint> all_tbx;
    std::vector<const Concept*> tbx_concepts;
    for (int i = 0; i < n; ++i) {
      const auto& rec = ds.instances[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < rec.boxes.size(); ++j) {
        all_tbx.push_back(table.lift(layout.text_boxes[static_cast<std::size_t>(i)][j], scalars));
        tbx_concepts.push_back(&rec.boxes[j].text_concept);
      }
    }
    std::vector<ProductPoint> eval_ibx;
    std::vector<const Concept*> truth;
    for (int i = n - ne; i < n; ++i) {
      const auto& rec = ds.instances[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < rec.boxes.size(); ++j) {
        eval_ibx.push_back(table.lift(layout.image_boxes[static_cast<std::size_t>(i)][j], scalars));
        truth.push_back(&rec.boxes[j].text_concept);
      }
    }
    auto dm = avg_distance_matrix(eval_ibx, all_tbx, opts.metric);
    double tie = 0, lca = 0, jac = 0, p_h = 0, r_h = 0;
    const std::size_t nc = all_tbx.size();
    for (std::size_t q = 0; q < eval_ibx.size(); ++q) {
      const double* row = dm.data() + q * nc;
      std::size_t best = 0;
      for (std::size_t c = 1; c < nc; ++c) {
        if (row[c] < row[best]) best = c;
      }
      const Concept* pred = tbx_concepts[best];
      const Concept* tru = truth[q];
      HierMetrics m;
      if (pred->family == tru->family) {
        m = hierarchical_metrics(pred->node, tru->node,
                                 ds.families[static_cast<std::size_t>(tru->family)].tree);
      } else {
        // Cross-family prediction: join the two taxonomies at a virtual
        // root one hop above each family root.
        const auto& ft = ds.families[static_cast<std::size_t>(tru->family)].tree;
        const auto& fp = ds.families[static_cast<std::size_t>(pred->family)].tree;
        int dpred = fp.depth(fp.index_of(pred->node)) + 1;
        int dtru = ft.depth(ft.index_of(tru->node)) + 1;
        m.tie = dpred + dtru;
        m.lca = std::max(dpred, dtru);
        m.jaccard = 0.0;
        m.p_h = 0.0;
        m.r_h = 0.0;
      }
      tie += m.tie;
      lca += m.lca;
      jac += m.jaccard;
      p_h += m.p_h;
      r_h += m.r_h;
    }
    double cnt = static_cast<double>(eval_ibx.size());
    rep.tie = tie / cnt;
    rep.lca = lca / cnt;
    rep.jaccard = jac / cnt;
    rep.p_h = p_h / cnt;
    rep.r_h = r_h / cnt;
  }

  // Entailment-cone containment over every training pair. The headline
  // rate counts a pair when it satisfies the cone criterion it was trained
  // with (phi < eta * omega, using that pair type's margin; for inter pairs
  // eta < 1 makes this stricter than plain containment). Strict phi < omega
  // rates per type are reported alongside.
  {
    long long total = 0, inside = 0;
    std::map<std::string, std::pair<long long, long long>> by_type;
    for (int i = 0; i < n; ++i) {
      const auto& rec = ds.instances[static_cast<std::size_t>(i)];
      ProductPoint img = table.lift(layout.image[static_cast<std::size_t>(i)], scalars);
      ProductPoint txt = table.lift(layout.text[static_cast<std::size_t>(i)], scalars);
      auto count = [&](const std::string& type, const ProductPoint& x, const ProductPoint& y,
                       double eta) {
        bool ok = pair_contained(x, y, scalars.cone, eta);
        ++total;
        inside += ok ? 1 : 0;
        auto& t = by_type[type + "_margin"];
        ++t.first;
        t.second += ok ? 1 : 0;
        auto& st = by_type[type + "_strict"];
        ++st.first;
        st.second += pair_contained(x, y, scalars.cone, 1.0) ? 1 : 0;
      };
      count("image_text", img, txt, scalars.eta_inter);
      for (std::size_t j = 0; j < rec.boxes.size(); ++j) {
        ProductPoint ibx = table.lift(layout.image_boxes[static_cast<std::size_t>(i)][j], scalars);
        ProductPoint tbx = table.lift(layout.text_boxes[static_cast<std::size_t>(i)][j], scalars);
        count("ibox_tbox", ibx, tbx, scalars.eta_inter);
        count("image_ibox", img, ibx, scalars.eta_intra);
        count("text_tbox", txt, tbx, scalars.eta_intra);
      }
    }
    rep.containment_rate = static_cast<double>(inside) / total;
    for (const auto& [type, counts] : by_type) {
      rep.containment_by_type[type] = static_cast<double>(counts.second) / counts.first;
    }
  }

  rep.norms = norm_stats(table, scalars, opts.histogram_bins);

  // Factor activation grouped by family over single-concept (box) entities.
  {
    std::map<std::string, std::vector<int>> grouping;
    for (int i = 0; i < n; ++i) {
      const auto& rec = ds.instances[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < rec.boxes.size(); ++j) {
        const std::string fam = ds.families[static_cast<std::size_t>(rec.boxes[j].image_concept.family)].family_id;
        grouping[fam].push_back(layout.image_boxes[static_cast<std::size_t>(i)][j]);
        grouping[fam].push_back(layout.text_boxes[static_cast<std::size_t>(i)][j]);
      }
    }
    rep.activation = activation_profile(table, scalars, grouping);
  }
  return rep;
}

std::string MetricsReport::to_json() const {
  json j;
  for (const auto& [k, v] : recall_at) j["recall_at"][std::to_string(k)] = v;
  j["tie"] = tie;
  j["lca"] = lca;
  j["jaccard"] = jaccard;
  j["p_h"] = p_h;
  j["r_h"] = r_h;
  j["containment_rate"] = containment_rate;
  for (const auto& [t, v] : containment_by_type) j["containment_by_type"][t] = v;
  for (const auto& [role, s] : norms) {
    json r;
    r["count"] = s.count;
    r["mean"] = s.mean;
    r["stddev"] = s.stddev;
    r["per_factor_mean"] = s.per_factor_mean;
    r["bin_edges"] = s.bin_edges;
    r["bin_counts"] = s.bin_counts;
    j["norms"][role] = std::move(r);
  }
  for (const auto& [g, means] : activation.factor_means) {
    j["activation"]["factor_means"][g] = means;
  }
  for (const auto& [g, a] : activation.argmax_factor) {
    j["activation"]["argmax_factor"][g] = a;
  }
  j["activation"]["specialization_purity"] = activation.specialization_purity;
  return j.dump(2);
}

}  // namespace hypf
