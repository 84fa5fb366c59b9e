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

#include "hypf/kernels.hpp"

#include <algorithm>
#include <vector>

#include "doctest.h"
#include "hypf/rng.hpp"

using namespace hypf;

TEST_SUITE("kernels") {

TEST_CASE("active variant reports itself") {
  INFO("active kernel variant: ", kernels::active_ops().name);
  CHECK(kernels::active_ops().cross_dot != nullptr);
  CHECK(kernels::scalar_ops().four_point_delta != nullptr);
}

TEST_CASE("cross_dot: active variant is bit-identical to the scalar reference") {
  Rng rng(83);
  for (int rep = 0; rep < 30; ++rep) {
    std::size_t na = 1 + rng.uniform_index(33);
    std::size_t nb = 1 + rng.uniform_index(33);
    std::size_t d = 1 + rng.uniform_index(12);
    std::vector<double> a(na * d), b(nb * d);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal();
    std::vector<double> out_ref(na * nb, -1.0), out_act(na * nb, -2.0);
    kernels::scalar_ops().cross_dot(a.data(), na, b.data(), nb, d, out_ref.data());
    kernels::active_ops().cross_dot(a.data(), na, b.data(), nb, d, out_act.data());
    CHECK(out_ref == out_act);
  }
}

TEST_CASE("cross_dot computes SoA dot products") {
  // 2 rows x 2 coords against 3 rows, checked by hand.
  // a: rows (1,3), (2,4); b: rows (5,8), (6,9), (7,10).
  std::vector<double> a{1, 2, 3, 4};        // [coord][row]
  std::vector<double> b{5, 6, 7, 8, 9, 10};  // [coord][row]
  std::vector<double> out(6);
  kernels::scalar_ops().cross_dot(a.data(), 2, b.data(), 3, 2, out.data());
  CHECK(out == std::vector<double>{1 * 5 + 3 * 8, 1 * 6 + 3 * 9, 1 * 7 + 3 * 10,
                                   2 * 5 + 4 * 8, 2 * 6 + 4 * 9, 2 * 7 + 4 * 10});
}

TEST_CASE("four_point_delta: variants agree bitwise and match a naive oracle") {
  Rng rng(89);
  for (int rep = 0; rep < 10; ++rep) {
    std::size_t n = 4 + rng.uniform_index(9);
    // Random symmetric matrix with zero diagonal; metric axioms are not
    // needed for the scan itself.
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double v = rng.uniform(0.1, 5.0);
        dist[i * n + j] = v;
        dist[j * n + i] = v;
      }
    }
    double ref = kernels::scalar_ops().four_point_delta(dist.data(), n);
    double act = kernels::active_ops().four_point_delta(dist.data(), n);
    CHECK(ref == act);

    double naive = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
          for (std::size_t l = k + 1; l < n; ++l) {
            std::vector<double> sums{dist[i * n + j] + dist[k * n + l],
                                     dist[i * n + k] + dist[j * n + l],
                                     dist[i * n + l] + dist[j * n + k]};
            std::sort(sums.begin(), sums.end());
            naive = std::max(naive, (sums[2] - sums[1]) / 2.0);
          }
    CHECK(ref == doctest::Approx(naive).epsilon(1e-15));
  }
}

TEST_CASE("four_point_delta of fewer than four points is zero") {
  std::vector<double> d(9, 1.0);
  CHECK(kernels::scalar_ops().four_point_delta(d.data(), 3) == 0.0);
}

TEST_CASE("force_scalar pins dispatch to the reference") {
  kernels::force_scalar(true);
  CHECK(std::string(kernels::active_ops().name) == "scalar");
  kernels::force_scalar(false);
}

}  // TEST_SUITE
