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

#ifndef HYPF_PRODUCT_HPP_
#define HYPF_PRODUCT_HPP_

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "hypf/lorentz.hpp"

namespace hypf {

// Number of hyperbolic factors and the dimension of each.
struct ProductShape {
  int k = 64;
  int d = 8;
  ProductShape(int k_, int d_) : k(k_), d(d_) {
    if (k <= 0 || d <= 0) throw InputError("ProductShape: k and d must be positive");
  }
  int total_dim() const { return k * d; }
};

// One embedded instance: an ordered tuple of factor points, one per
// hyperbolic factor, each with its own curvature.
class ProductPoint {
 public:
  explicit ProductPoint(std::vector<FactorPoint> factors)
      : factors_(std::move(factors)) {
    if (factors_.empty()) throw InputError("ProductPoint: needs at least one factor");
    int d = factors_.front().dim();
    for (const auto& f : factors_) {
      if (f.dim() != d) throw InputError("ProductPoint: factors have mixed dimensions");
    }
  }

  int k() const { return static_cast<int>(factors_.size()); }
  int d() const { return factors_.front().dim(); }
  const FactorPoint& factor(int i) const { return factors_[static_cast<std::size_t>(i)]; }
  const std::vector<FactorPoint>& factors() const { return factors_; }

 private:
  std::vector<FactorPoint> factors_;
};

namespace detail {
inline void check_shapes(const ProductPoint& x, const ProductPoint& y) {
  if (x.k() != y.k() || x.d() != y.d()) {
    throw InputError("product points have mismatched shapes");
  }
  for (int i = 0; i < x.k(); ++i) {
    if (x.factor(i).alpha() != y.factor(i).alpha()) {
      throw InputError("product points have mismatched per-factor curvatures");
    }
  }
}
}  // namespace detail

// l1-product distance: the sum of per-factor geodesic distances.
// Left-to-right summation order for bit-stable results.
inline double l1_distance(const ProductPoint& x, const ProductPoint& y) {
  detail::check_shapes(x, y);
  double s = 0.0;
  for (int i = 0; i < x.k(); ++i) s += distance(x.factor(i), y.factor(i));
  return s;
}

inline double avg_distance(const ProductPoint& x, const ProductPoint& y) {
  return l1_distance(x, y) / x.k();
}

// Riemannian (l2) product distance, kept for the ablation path.
inline double l2_distance(const ProductPoint& x, const ProductPoint& y) {
  detail::check_shapes(x, y);
  double s = 0.0;
  for (int i = 0; i < x.k(); ++i) {
    double di = distance(x.factor(i), y.factor(i));
    s += di * di;
  }
  return std::sqrt(s);
}

// Scales the feature vector, slices it into k contiguous segments of length
// d (segment i = coordinates [i*d, (i+1)*d)), and lifts each segment onto
// its factor via exp0.
inline ProductPoint slice_and_lift(std::span<const double> feature,
                                   ProductShape shape,
                                   const std::vector<double>& alphas,
                                   double scale) {
  if (static_cast<int>(feature.size()) != shape.total_dim()) {
    throw InputError("slice_and_lift: feature length does not match k*d");
  }
  if (static_cast<int>(alphas.size()) != shape.k) {
    throw InputError("slice_and_lift: need one curvature per factor");
  }
  if (!(scale > 0.0)) throw InputError("slice_and_lift: scale must be positive");
  std::vector<FactorPoint> factors;
  factors.reserve(static_cast<std::size_t>(shape.k));
  for (int i = 0; i < shape.k; ++i) {
    TangentVector v(static_cast<std::size_t>(shape.d));
    for (int c = 0; c < shape.d; ++c) {
      v[static_cast<std::size_t>(c)] = scale * feature[static_cast<std::size_t>(i * shape.d + c)];
    }
    factors.push_back(exp0(v, Curvature(alphas[static_cast<std::size_t>(i)])));
  }
  return ProductPoint(std::move(factors));
}

}  // namespace hypf

#endif  // HYPF_PRODUCT_HPP_
