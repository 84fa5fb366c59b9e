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

#ifndef HYPF_METRICS_HPP_
#define HYPF_METRICS_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hypf/combinatorics.hpp"
#include "hypf/losses.hpp"
#include "hypf/synthetic.hpp"
#include "hypf/train.hpp"

namespace hypf {

// Fraction of queries whose paired candidate ranks in the top k by distance;
// ties broken by the stable candidate index.
double recall_at_k(std::span<const ProductPoint> queries,
                   std::span<const ProductPoint> candidates,
                   std::span<const int> paired, int k,
                   ProductMetric metric = ProductMetric::l1);

// Taxonomy-aware error metrics on a unit-edge tree. Ancestor sets include
// the node itself.
struct HierMetrics {
  double tie = 0.0;      // graph distance between pred and truth
  double lca = 0.0;      // max hop distance to the lowest common ancestor
  double jaccard = 1.0;  // |A_p & A_t| / |A_p | A_t|
  double p_h = 1.0;      // |A_p & A_t| / |A_p|
  double r_h = 1.0;      // |A_p & A_t| / |A_t|
};
HierMetrics hierarchical_metrics(const std::string& pred, const std::string& truth,
                                 const MetricTree& taxonomy);

// Norm distributions per role. The overall norm of an entity is the sum of
// its per-factor distances from the origin.
struct RoleNormStats {
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> per_factor_mean;  // k entries
  std::vector<double> bin_edges;        // bins+1 entries
  std::vector<int> bin_counts;          // bins entries
};
std::map<std::string, RoleNormStats> norm_stats(const EmbeddingTable& table,
                                                const TrainScalars& scalars, int bins = 20);

// Per-group mean factor norms, the argmax factor per group (ties toward the
// lowest index) and the fraction of groups whose argmax factor is claimed by
// no other group.
struct ActivationProfile {
  std::map<std::string, std::vector<double>> factor_means;
  std::map<std::string, int> argmax_factor;
  double specialization_purity = 1.0;
};
ActivationProfile activation_profile(const EmbeddingTable& table, const TrainScalars& scalars,
                                     const std::map<std::string, std::vector<int>>& grouping);

// Factor-wise composition: per factor the input whose point has the larger
// norm wins; ties take the first argument.
ProductPoint compose_max(const ProductPoint& x, const ProductPoint& y);

// Aggregate evaluation report for a trained checkpoint on its dataset.
struct MetricsReport {
  std::map<int, double> recall_at;            // k -> value (text -> image)
  double tie = 0.0, lca = 0.0, jaccard = 0.0, p_h = 0.0, r_h = 0.0;
  double containment_rate = 0.0;              // entailment pairs fully inside cones
  std::map<std::string, double> containment_by_type;
  std::map<std::string, RoleNormStats> norms;
  ActivationProfile activation;
  std::string to_json() const;
};

struct EvalOptions {
  std::vector<int> recall_ks{1, 5, 10};
  int eval_instances = 200;  // evaluation subset size (taken from the end)
  ProductMetric metric = ProductMetric::l1;
  int histogram_bins = 20;
};

MetricsReport evaluate(const Dataset& ds, const EmbeddingTable& table,
                       const TrainScalars& scalars, const EntityLayout& layout,
                       const EvalOptions& opts = {});

}  // namespace hypf

#endif  // HYPF_METRICS_HPP_
