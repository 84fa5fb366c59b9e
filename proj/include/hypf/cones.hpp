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

#ifndef HYPF_CONES_HPP_
#define HYPF_CONES_HPP_

#include <algorithm>
#include <cmath>

#include "hypf/lorentz.hpp"

namespace hypf {

// Aperture constant of the entailment cones.
struct ConeParams {
  double K = 0.1;
};

constexpr double kHalfPi = 1.5707963267948966192313216916398;

// Half-aperture of the cone with apex y:
//   omega(y) = arcsin(min{1, 2K / (sqrt(alpha) * |y|)})
// The min-clamp makes the aperture a flat pi/2 for apexes close to (or at)
// the origin.
inline double half_aperture(const FactorPoint& y, ConeParams params) {
  if (!(params.K > 0.0)) throw InputError("half_aperture: K must be positive");
  double n = y.space_norm();
  if (n == 0.0) return kHalfPi;
  double q = 2.0 * params.K / (std::sqrt(y.alpha()) * n);
  if (q >= 1.0) return kHalfPi;
  return std::asin(q);
}

// Exterior angle at y between the cone axis (the ray from the origin through
// y) and the geodesic from y toward x:
//   phi(x, y) = arccos( (x0 + y0 * alpha * <x,y>) / (|y| * sqrt((alpha<x,y>)^2 - 1)) )
// Undefined at the origin apex and for coincident points.
inline double exterior_angle(const FactorPoint& x, const FactorPoint& y) {
  detail::check_compatible(x, y);
  double yn = y.space_norm();
  if (yn == 0.0) {
    throw InputError("exterior_angle: apex at origin has no axis");
  }
  double s = detail::sinh_sq_half_dist(x, y);
  if (s <= 1e-12) {
    throw InputError("exterior_angle: angle undefined for coincident points");
  }
  double z = 1.0 + 2.0 * s;                // -alpha * <x,y>
  double num = x.time() - y.time() * z;    // x0 + y0 * alpha * <x,y>
  double den = yn * 2.0 * std::sqrt(s * (1.0 + s));  // |y| * sqrt(z^2 - 1)
  double c = num / den;
  if (c > 1.0) {
    if (c > 1.0 + tolerances::acos_domain) {
      throw DomainError("exterior_angle: arccos argument above domain tolerance");
    }
    c = 1.0;
  } else if (c < -1.0) {
    if (c < -1.0 - tolerances::acos_domain) {
      throw DomainError("exterior_angle: arccos argument below domain tolerance");
    }
    c = -1.0;
  }
  return std::acos(c);
}

// Membership predicate: x lies in the cone with apex y iff the exterior
// angle stays below the half-aperture.
inline bool in_cone(const FactorPoint& x, const FactorPoint& y, ConeParams params) {
  return exterior_angle(x, y) < half_aperture(y, params);
}

}  // namespace hypf

#endif  // HYPF_CONES_HPP_
