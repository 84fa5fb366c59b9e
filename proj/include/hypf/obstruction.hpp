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

#ifndef HYPF_OBSTRUCTION_HPP_
#define HYPF_OBSTRUCTION_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "hypf/lorentz.hpp"

namespace hypf {

struct ObstructionOptions {
  int dim = 2;
  double alpha = 1.0;
  int starts = 20;              // random starts, plus the exact midpoint seed
  bool seed_midpoint = true;
  int stage_iters = 600;        // Nelder-Mead iterations per penalty stage
  double constraint_tol = 1e-6;
  std::uint64_t seed = 20260810;
};

// Outcome of the unit-square realizability search in a single hyperbolic
// space: four points a, b, c, e are pushed to satisfy
//   d(a,b) = d(b,c) = d(a,e) = d(e,c) = 1  and  d(a,c) = 2,
// while d(b,e) is maximized. In hyperbolic space the 1+1 = 2 chain forces b
// and e onto the unique geodesic midpoint of [a,c], so the achieved maximum
// collapses to ~0 even though the Hamming 4-cycle wants d(b,e) = 2.
struct ObstructionReport {
  double max_bd = 0.0;              // best feasible objective found
  std::array<double, 5> residuals;  // |constraint violations| at the best point
  int feasible_starts = 0;
  std::vector<TangentVector> best_points;  // tangent parameters of a, b, c, e
};

ObstructionReport midpoint_obstruction_witness(const ObstructionOptions& opts = {});

}  // namespace hypf

#endif  // HYPF_OBSTRUCTION_HPP_
