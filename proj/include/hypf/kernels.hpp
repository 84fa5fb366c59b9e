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

#ifndef HYPF_KERNELS_HPP_
#define HYPF_KERNELS_HPP_

#include <cstddef>

namespace hypf {
namespace kernels {

// Arithmetic inner loops, provided as scalar reference implementations plus
// SIMD variants selected once at startup. Every variant produces outputs
// bit-identical to the scalar reference: each output element is accumulated
// in the same operation order, and the quadruple scan reduces through
// order-independent max/min, so dispatch never changes results.
struct Ops {
  // Cross dot-product block between two SoA coordinate blocks.
  // a is laid out [coord][row] with na rows, b likewise with nb rows;
  // out[i*nb + j] = sum_c a[c*na + i] * b[c*nb + j].
  void (*cross_dot)(const double* a, std::size_t na, const double* b,
                    std::size_t nb, std::size_t d, double* out);

  // Maximum four-point defect over all unordered quadruples of a symmetric
  // n x n distance matrix: for each quadruple the three perfect-matching
  // pair sums are formed and (largest - second largest) / 2 is taken.
  double (*four_point_delta)(const double* dist, std::size_t n);

  const char* name;
};

const Ops& scalar_ops();

// Best variant supported by the CPU this process runs on.
const Ops& active_ops();

// Forces active_ops() to return the scalar reference (used by tests and by
// the deterministic-mode plumbing; results are identical either way).
void force_scalar(bool on);

}  // namespace kernels
}  // namespace hypf

#endif  // HYPF_KERNELS_HPP_
