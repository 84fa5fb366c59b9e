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

#ifndef HYPF_PLOT_HPP_
#define HYPF_PLOT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "hypf/lorentz.hpp"

namespace hypf {

// Lorentz -> Poincare ball chart: p = x / (x0 + alpha^{-1/2}).
std::vector<double> to_poincare(const FactorPoint& p);

// Labeled points of one d=2 factor rendered into the Poincare disk.
std::string render_disk_svg(const std::vector<std::pair<std::string, FactorPoint>>& entities,
                            const std::string& title);

// Horizontal bar chart (one bar per label), used for per-factor norms when
// the factor dimension is not 2.
std::string render_bars_svg(const std::vector<std::pair<std::string, double>>& bars,
                            const std::string& title);

}  // namespace hypf

#endif  // HYPF_PLOT_HPP_
