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

// Test-only reference implementations of the losses, written as direct
// long-double transcriptions of the formulas with none of the production
// code's stabilization tricks. They stay independent of the library's
// computation paths so they can serve as oracles.

#ifndef HYPF_TESTS_ORACLES_HPP_
#define HYPF_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <vector>

#include "hypf/combinatorics.hpp"
#include "hypf/table.hpp"

namespace oracle {

using hypf::Batch;
using hypf::EmbeddingTable;
using hypf::TrainScalars;

using ld = long double;

struct LiftedEntity {
  // per factor: space coords and the time coordinate
  std::vector<std::vector<ld>> space;
  std::vector<ld> time;
  std::vector<ld> alpha;
};

inline LiftedEntity lift(const EmbeddingTable& table, const TrainScalars& scalars, int entity) {
  const auto shape = table.shape();
  LiftedEntity out;
  ld c = std::exp(static_cast<ld>(
      (table.role(entity) == hypf::Role::image || table.role(entity) == hypf::Role::image_box)
          ? scalars.log_c_img
          : scalars.log_c_txt));
  auto params = table.params(entity);
  for (int i = 0; i < shape.k; ++i) {
    ld a = scalars.alpha[static_cast<std::size_t>(i)];
    ld sa = sqrtl(a);
    std::vector<ld> v(static_cast<std::size_t>(shape.d));
    ld nsq = 0;
    for (int x = 0; x < shape.d; ++x) {
      v[static_cast<std::size_t>(x)] = c * static_cast<ld>(params[static_cast<std::size_t>(i * shape.d + x)]);
      nsq += v[static_cast<std::size_t>(x)] * v[static_cast<std::size_t>(x)];
    }
    ld t = sqrtl(nsq);
    ld g = (t < 1e-30L) ? 1.0L : sinhl(sa * t) / (sa * t);
    std::vector<ld> xs(v.size());
    ld xnsq = 0;
    for (std::size_t x = 0; x < v.size(); ++x) {
      xs[x] = g * v[x];
      xnsq += xs[x] * xs[x];
    }
    out.space.push_back(std::move(xs));
    out.time.push_back(sqrtl(1.0L / a + xnsq));
    out.alpha.push_back(a);
  }
  return out;
}

inline ld factor_distance(const LiftedEntity& p, const LiftedEntity& q, int i) {
  ld a = p.alpha[static_cast<std::size_t>(i)];
  ld dot = 0;
  for (std::size_t x = 0; x < p.space[static_cast<std::size_t>(i)].size(); ++x) {
    dot += p.space[static_cast<std::size_t>(i)][x] * q.space[static_cast<std::size_t>(i)][x];
  }
  ld z = -a * (-p.time[static_cast<std::size_t>(i)] * q.time[static_cast<std::size_t>(i)] + dot);
  if (z < 1.0L) z = 1.0L;
  return acoshl(z) / sqrtl(a);
}

inline ld avg_distance(const LiftedEntity& p, const LiftedEntity& q, int k) {
  ld s = 0;
  for (int i = 0; i < k; ++i) s += factor_distance(p, q, i);
  return s / k;
}

inline ld infonce(const std::vector<LiftedEntity>& xs, const std::vector<LiftedEntity>& ys,
                  int k, ld tau) {
  ld total = 0;
  for (std::size_t b = 0; b < xs.size(); ++b) {
    ld denom = 0;
    for (std::size_t a = 0; a < ys.size(); ++a) {
      denom += expl(-avg_distance(xs[b], ys[a], k) / tau);
    }
    ld num = expl(-avg_distance(xs[b], ys[b], k) / tau);
    total += -logl(num / denom);
  }
  return total;
}

inline double contrastive_total(const Batch& batch, const EmbeddingTable& table,
                                const TrainScalars& scalars) {
  const int k = table.shape().k;
  std::vector<LiftedEntity> img, txt, ibx, tbx;
  for (const auto& item : batch) {
    img.push_back(lift(table, scalars, item.image));
    txt.push_back(lift(table, scalars, item.text));
    ibx.push_back(lift(table, scalars, item.image_box));
    tbx.push_back(lift(table, scalars, item.text_box));
  }
  ld tau = scalars.tau_temp;
  return static_cast<double>(0.25L * (infonce(img, txt, k, tau) + infonce(txt, img, k, tau) +
                                      infonce(ibx, tbx, k, tau) + infonce(tbx, ibx, k, tau)));
}

inline ld entail_pair(const LiftedEntity& x, const LiftedEntity& y, int k, ld eta, ld K) {
  ld total = 0;
  for (int i = 0; i < k; ++i) {
    ld a = x.alpha[static_cast<std::size_t>(i)];
    ld sa = sqrtl(a);
    ld ny = 0;
    for (ld v : y.space[static_cast<std::size_t>(i)]) ny += v * v;
    ny = sqrtl(ny);
    if (ny <= 1e-8L) continue;
    ld dot = 0;
    for (std::size_t c = 0; c < x.space[static_cast<std::size_t>(i)].size(); ++c) {
      dot += x.space[static_cast<std::size_t>(i)][c] * y.space[static_cast<std::size_t>(i)][c];
    }
    ld minkowski = -x.time[static_cast<std::size_t>(i)] * y.time[static_cast<std::size_t>(i)] + dot;
    ld z = -a * minkowski;
    if (z - 1.0L <= 2e-12L) continue;  // coincident by the production convention
    ld qq = 2.0L * K / (sa * ny);
    ld omega = (qq >= 1.0L) ? (ld)M_PI / 2 : asinl(qq);
    ld num = x.time[static_cast<std::size_t>(i)] + y.time[static_cast<std::size_t>(i)] * a * minkowski;
    ld den = ny * sqrtl(z * z - 1.0L);
    ld c = num / den;
    if (c > 1.0L) c = 1.0L;
    if (c < -1.0L) c = -1.0L;
    ld phi = acosl(c);
    ld hinge = phi - eta * omega;
    if (hinge > 0) total += hinge;
  }
  return total / k;
}

inline double entailment_total(const Batch& batch, const EmbeddingTable& table,
                               const TrainScalars& scalars) {
  const int k = table.shape().k;
  ld total = 0;
  for (const auto& item : batch) {
    auto img = lift(table, scalars, item.image);
    auto txt = lift(table, scalars, item.text);
    auto ibx = lift(table, scalars, item.image_box);
    auto tbx = lift(table, scalars, item.text_box);
    total += entail_pair(img, txt, k, scalars.eta_inter, scalars.cone.K);
    total += entail_pair(ibx, tbx, k, scalars.eta_inter, scalars.cone.K);
    total += entail_pair(img, ibx, k, scalars.eta_intra, scalars.cone.K);
    total += entail_pair(txt, tbx, k, scalars.eta_intra, scalars.cone.K);
  }
  return static_cast<double>(total);
}

// Breadth-first taxonomy oracle over the undirected adjacency, independent
// of the library's LCA-walk implementation.
struct HierOracle {
  double tie, lca, jaccard, p_h, r_h;
};

inline HierOracle hier_oracle(const hypf::MetricTree& t, int pred, int truth) {
  int n = t.size();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    if (v == t.root()) continue;
    adj[static_cast<std::size_t>(v)].push_back(t.parent(v));
    adj[static_cast<std::size_t>(t.parent(v))].push_back(v);
  }
  auto bfs = [&](int src) {
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::queue<int> q;
    q.push(src);
    dist[static_cast<std::size_t>(src)] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int u : adj[static_cast<std::size_t>(v)]) {
        if (dist[static_cast<std::size_t>(u)] < 0) {
          dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
          q.push(u);
        }
      }
    }
    return dist;
  };
  auto dp = bfs(pred);
  auto dt = bfs(truth);
  HierOracle o{};
  o.tie = dp[static_cast<std::size_t>(truth)];
  std::set<int> anc_p, anc_t;
  for (int v = pred; v != -1; v = t.parent(v)) anc_p.insert(v);
  for (int v = truth; v != -1; v = t.parent(v)) anc_t.insert(v);
  int best_lca = -1;
  for (int v = pred; v != -1; v = t.parent(v)) {
    if (anc_t.count(v)) {
      best_lca = v;
      break;
    }
  }
  o.lca = std::max(dp[static_cast<std::size_t>(best_lca)], dt[static_cast<std::size_t>(best_lca)]);
  int inter = 0;
  for (int v : anc_p) inter += anc_t.count(v) ? 1 : 0;
  int uni = static_cast<int>(anc_p.size() + anc_t.size()) - inter;
  o.jaccard = static_cast<double>(inter) / uni;
  o.p_h = static_cast<double>(inter) / anc_p.size();
  o.r_h = static_cast<double>(inter) / anc_t.size();
  return o;
}

}  // namespace oracle

#endif  // HYPF_TESTS_ORACLES_HPP_
