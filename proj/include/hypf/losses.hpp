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

#ifndef HYPF_LOSSES_HPP_
#define HYPF_LOSSES_HPP_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypf/table.hpp"

namespace hypf {

enum class ProductMetric { l1, l2 };
ProductMetric metric_from_name(const std::string& name);
const char* metric_name(ProductMetric m);

// Averaged product distances between two point sets, row-major with one row
// per query. For l2 the per-factor distances combine Pythagorean-style
// before the 1/k averaging. Inner dot products run through the kernel
// dispatch.
std::vector<double> avg_distance_matrix(std::span<const ProductPoint> queries,
                                        std::span<const ProductPoint> candidates,
                                        ProductMetric metric = ProductMetric::l1);

// InfoNCE negative log likelihood summed over the rows of a square averaged
// distance matrix, with max-subtraction inside the softmax. A 1x1 matrix
// gives exactly 0.
double contrastive_nll(std::span<const double> avg_dist, int n, double tau);

double contrastive_loss(std::span<const ProductPoint> x, std::span<const ProductPoint> y,
                        double tau, ProductMetric metric = ProductMetric::l1);

// Per-pair entailment loss (1/k) * sum_i max(0, phi_i - eta * omega_i) where
// `specific` is the entailed (more specific) element. Factors whose general
// point sits at the apex (|y| <= 1e-8) or that coincide contribute 0.
double entailment_pair_loss(const ProductPoint& specific, const ProductPoint& general,
                            double eta, const TrainScalars& scalars);

double contrastive_total(const Batch& batch, const EmbeddingTable& table,
                         const TrainScalars& scalars,
                         ProductMetric metric = ProductMetric::l1);
double entailment_total(const Batch& batch, const EmbeddingTable& table,
                        const TrainScalars& scalars);

struct LossValue {
  double contrastive = 0.0;
  double entailment = 0.0;
  double overall = 0.0;
};

LossValue overall_loss(const Batch& batch, const EmbeddingTable& table,
                       const TrainScalars& scalars,
                       ProductMetric metric = ProductMetric::l1);

struct Gradients {
  std::unordered_map<int, std::vector<double>> table;  // entity -> d(kd)
  double tau = 0.0;
  double log_c_img = 0.0;
  double log_c_txt = 0.0;
  std::vector<double> alpha;
};

// Analytic gradient of overall_loss with respect to every touched table row
// and the unclamped scalars, by reverse-mode chain rule through the lift,
// the distance kernel, the softmax and the cone hinge. Returns the forward
// value computed along the way.
LossValue loss_gradient(const Batch& batch, const EmbeddingTable& table,
                        const TrainScalars& scalars, Gradients& out,
                        ProductMetric metric = ProductMetric::l1);

}  // namespace hypf

#endif  // HYPF_LOSSES_HPP_
