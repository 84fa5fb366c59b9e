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

#ifndef HYPF_GRADCHECK_HPP_
#define HYPF_GRADCHECK_HPP_

#include <cstdint>
#include <vector>

#include "hypf/losses.hpp"

namespace hypf {

struct GradCheckOptions {
  std::vector<int> ks{1, 2, 8};
  std::vector<int> ds{2, 8};
  std::vector<double> alpha_choices{0.1, 1.0, 10.0};
  int batch = 3;
  double fd_step = 1e-5;
  double grad_floor = 1e-6;
  ProductMetric metric = ProductMetric::l1;
};

struct GradCheckResult {
  double max_rel_err = 0.0;
  int configs = 0;
  long long coords_checked = 0;
};

// Compares the analytic gradient of overall_loss against central finite
// differences on random configurations. Configurations are resampled away
// from hinge kinks and clamp boundaries so the two-sided difference measures
// the same smooth branch the analytic gradient differentiates.
GradCheckResult run_gradcheck(int n_configs, std::uint64_t seed,
                              const GradCheckOptions& opts = {});

}  // namespace hypf

#endif  // HYPF_GRADCHECK_HPP_
