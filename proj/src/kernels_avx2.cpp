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

// AVX2 kernel variants. Compiled with -mavx2 in its own translation unit and
// reached only through the runtime dispatch in kernels.cpp. Accumulation
// order per output element matches the scalar reference exactly, so results
// are bit-identical; FMA contraction is disabled for the same reason.

#include "hypf/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

#include <algorithm>

namespace hypf {
namespace kernels {

namespace {

void cross_dot_avx2(const double* a, std::size_t na, const double* b,
                    std::size_t nb, std::size_t d, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    double* row = out + i * nb;
    std::size_t j = 0;
    for (; j + 4 <= nb; j += 4) _mm256_storeu_pd(row + j, _mm256_setzero_pd());
    for (; j < nb; ++j) row[j] = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double av = a[c * na + i];
      const __m256d avv = _mm256_set1_pd(av);
      const double* bc = b + c * nb;
      j = 0;
      for (; j + 4 <= nb; j += 4) {
        __m256d acc = _mm256_loadu_pd(row + j);
        __m256d bv = _mm256_loadu_pd(bc + j);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(avv, bv));
        _mm256_storeu_pd(row + j, acc);
      }
      for (; j < nb; ++j) row[j] += av * bc[j];
    }
  }
}

double four_point_delta_avx2(const double* dist, std::size_t n) {
  if (n < 4) return 0.0;
  __m256d vbest = _mm256_setzero_pd();
  double best = 0.0;
  for (std::size_t i = 0; i + 3 < n; ++i) {
    const double* di = dist + i * n;
    for (std::size_t j = i + 1; j + 2 < n; ++j) {
      const double* dj = dist + j * n;
      const double dij = di[j];
      for (std::size_t k = j + 1; k + 1 < n; ++k) {
        const double* dk = dist + k * n;
        const double dik = di[k];
        const double djk = dj[k];
        const __m256d vij = _mm256_set1_pd(dij);
        const __m256d vik = _mm256_set1_pd(dik);
        const __m256d vjk = _mm256_set1_pd(djk);
        std::size_t l = k + 1;
        for (; l + 4 <= n; l += 4) {
          __m256d s1 = _mm256_add_pd(vij, _mm256_loadu_pd(dk + l));
          __m256d s2 = _mm256_add_pd(vik, _mm256_loadu_pd(dj + l));
          __m256d s3 = _mm256_add_pd(vjk, _mm256_loadu_pd(di + l));
          __m256d hi = _mm256_max_pd(s1, _mm256_max_pd(s2, s3));
          __m256d lo = _mm256_min_pd(s1, _mm256_min_pd(s2, s3));
          __m256d mid = _mm256_sub_pd(
              _mm256_sub_pd(_mm256_add_pd(s1, _mm256_add_pd(s2, s3)), hi), lo);
          vbest = _mm256_max_pd(vbest, _mm256_sub_pd(hi, mid));
        }
        for (; l < n; ++l) {
          double s1 = dij + dk[l];
          double s2 = dik + dj[l];
          double s3 = djk + di[l];
          double hi = std::max(s1, std::max(s2, s3));
          double lo = std::min(s1, std::min(s2, s3));
          best = std::max(best, hi - (s1 + s2 + s3 - hi - lo));
        }
      }
    }
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vbest);
  for (double v : lanes) best = std::max(best, v);
  return 0.5 * best;
}

const Ops kAvx2Ops = {cross_dot_avx2, four_point_delta_avx2, "avx2"};

}  // namespace

const Ops& avx2_ops() { return kAvx2Ops; }

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

}  // namespace kernels
}  // namespace hypf

#endif  // defined(__x86_64__)
