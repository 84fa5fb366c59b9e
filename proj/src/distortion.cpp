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

#include "hypf/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "hypf/errors.hpp"
#include "hypf/kernels.hpp"

namespace hypf {

EmbeddingQuality measure_distortion(int n, const MetricFn& source, const MetricFn& target,
                                    const std::vector<std::string>& ids) {
  if (n < 2) throw InputError("measure_distortion: need at least two points");
  if (static_cast<int>(ids.size()) != n) {
    throw InputError("measure_distortion: ids size does not match point count");
  }
  auto pair_key = [&ids](int i, int j) {
    const std::string& a = ids[static_cast<std::size_t>(i)];
    const std::string& b = ids[static_cast<std::size_t>(j)];
    return (a <= b) ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  EmbeddingQuality q;
  q.lambda = -1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double ds = source(i, j);
      double dt = target(i, j);
      if (ds <= 0.0) {
        throw InputError("measure_distortion: source metric has coincident points " +
                         ids[static_cast<std::size_t>(i)] + ", " + ids[static_cast<std::size_t>(j)]);
      }
      if (dt < 1e-12) {
        throw InputError("measure_distortion: map is not injective at pair " +
                         ids[static_cast<std::size_t>(i)] + ", " + ids[static_cast<std::size_t>(j)]);
      }
      double ratio = std::max(dt / ds, ds / dt);
      auto key = pair_key(i, j);
      if (ratio > q.lambda || (ratio == q.lambda && key < q.worst_pair)) {
        q.lambda = ratio;
        q.worst_pair = std::move(key);
      }
    }
  }
  return q;
}

double gromov_delta(const std::vector<double>& dist, int n) {
  if (n < 0 || static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != dist.size()) {
    throw InputError("gromov_delta: matrix size mismatch");
  }
  if (n < 4) return 0.0;
  return kernels::active_ops().four_point_delta(dist.data(), static_cast<std::size_t>(n));
}

std::vector<double> grid_l1_distance_matrix(int m) {
  if (m < 1) throw InputError("grid_l1_distance_matrix: m must be positive");
  int n = m * m;
  std::vector<double> d(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    int ax = a % m, ay = a / m;
    for (int b = 0; b < n; ++b) {
      int bx = b % m, by = b / m;
      d[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)] =
          std::abs(ax - bx) + std::abs(ay - by);
    }
  }
  return d;
}

}  // namespace hypf
