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
#include <atomic>

namespace hypf {
namespace kernels {

namespace {

void cross_dot_scalar(const double* a, std::size_t na, const double* b,
                      std::size_t nb, std::size_t d, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    double* row = out + i * nb;
    for (std::size_t j = 0; j < nb; ++j) row[j] = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      double av = a[c * na + i];
      const double* bc = b + c * nb;
      for (std::size_t j = 0; j < nb; ++j) row[j] += av * bc[j];
    }
  }
}

double four_point_delta_scalar(const double* dist, std::size_t n) {
  if (n < 4) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i + 3 < n; ++i) {
    const double* di = dist + i * n;
    for (std::size_t j = i + 1; j + 2 < n; ++j) {
      const double* dj = dist + j * n;
      double dij = di[j];
      for (std::size_t k = j + 1; k + 1 < n; ++k) {
        const double* dk = dist + k * n;
        double dik = di[k];
        double djk = dj[k];
        for (std::size_t l = k + 1; l < n; ++l) {
          double s1 = dij + dk[l];
          double s2 = dik + dj[l];
          double s3 = djk + di[l];
          double hi = std::max(s1, std::max(s2, s3));
          double lo = std::min(s1, std::min(s2, s3));
          double mid = s1 + s2 + s3 - hi - lo;
          best = std::max(best, hi - mid);
        }
      }
    }
  }
  return 0.5 * best;
}

const Ops kScalarOps = {cross_dot_scalar, four_point_delta_scalar, "scalar"};

std::atomic<bool> g_force_scalar{false};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

#if defined(__x86_64__)
const Ops& avx2_ops();  // defined in kernels_avx2.cpp
bool cpu_has_avx2();
#endif

const Ops& active_ops() {
  if (g_force_scalar.load(std::memory_order_relaxed)) return kScalarOps;
#if defined(__x86_64__)
  static const Ops* best = cpu_has_avx2() ? &avx2_ops() : &kScalarOps;
  return *best;
#else
  return kScalarOps;
#endif
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

}  // namespace kernels
}  // namespace hypf
