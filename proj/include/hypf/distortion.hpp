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

#ifndef HYPF_DISTORTION_HPP_
#define HYPF_DISTORTION_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hypf {

// Multiplicative distortion achieved by an embedding, with the additive
// term pinned to zero and the witnessing worst pair.
struct EmbeddingQuality {
  double lambda = 1.0;
  double additive_c = 0.0;
  std::pair<std::string, std::string> worst_pair;
};

using MetricFn = std::function<double(int, int)>;

// Worst-pair multiplicative distortion max(d_target/d_source, d_source/d_target)
// over all pairs of [0, n). Requires an injective map: a pair at target
// distance < 1e-12 with positive source distance is rejected. Ties on lambda
// break toward the lexicographically smallest (id, id) pair.
EmbeddingQuality measure_distortion(int n, const MetricFn& source, const MetricFn& target,
                                    const std::vector<std::string>& ids);

// Four-point Gromov hyperbolicity constant of a finite metric, from its full
// distance matrix (row-major n x n): the maximum over quadruples of half the
// gap between the largest and second-largest of the three pair-sum
// matchings. Fewer than four points give 0. Brute force O(n^4).
//
// This is the four-point delta, not the slim-triangle delta: finite samples
// carry no geodesics, and the two differ only by universal constant factors.
double gromov_delta(const std::vector<double>& dist, int n);

// Distance matrix of the l1-product of two unit-edge path trees with m
// nodes each (the m x m grid witness used by the delta-growth diagnostic).
std::vector<double> grid_l1_distance_matrix(int m);

}  // namespace hypf

#endif  // HYPF_DISTORTION_HPP_
