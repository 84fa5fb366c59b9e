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

#ifndef HYPF_LORENTZ_HPP_
#define HYPF_LORENTZ_HPP_

#include <cmath>
#include <span>
#include <vector>

#include "hypf/errors.hpp"

namespace hypf {

// Tolerances used by the geometry kernels. Mutable so callers with unusual
// precision requirements can override them process-wide.
namespace tolerances {
inline double acosh_domain = 1e-9;   // arccosh args in [1 - tol, 1] clamp to 1
inline double acos_domain = 1e-9;    // arccos args clamp into [-1, 1]
inline double grad_boundary = 1e-9;  // distance-to-boundary floor inside gradients
}  // namespace tolerances

// Magnitude of the negative sectional curvature of one hyperbolic factor.
struct Curvature {
  double alpha;
  explicit Curvature(double a) : alpha(a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw InputError("Curvature: alpha must be positive and finite");
    }
  }
};

using TangentVector = std::vector<double>;

// A point on the upper hyperboloid sheet of curvature -alpha, stored by its
// space coordinates only; the time coordinate is recomputed on demand so the
// sheet constraint cannot drift.
class FactorPoint {
 public:
  FactorPoint(std::vector<double> space, Curvature c)
      : space_(std::move(space)), alpha_(c.alpha) {
    for (double v : space_) {
      if (!std::isfinite(v)) throw InputError("FactorPoint: non-finite coordinate");
    }
  }

  static FactorPoint origin(int dim, Curvature c) {
    return FactorPoint(std::vector<double>(static_cast<std::size_t>(dim), 0.0), c);
  }

  const std::vector<double>& space() const { return space_; }
  double alpha() const { return alpha_; }
  int dim() const { return static_cast<int>(space_.size()); }

  double space_norm_sq() const {
    double s = 0.0;
    for (double v : space_) s += v * v;
    return s;
  }
  double space_norm() const { return std::sqrt(space_norm_sq()); }

  // Implied time coordinate x0 = sqrt(1/alpha + |x|^2) > 0.
  double time() const { return std::sqrt(1.0 / alpha_ + space_norm_sq()); }

 private:
  std::vector<double> space_;
  double alpha_;
};

// arccosh(1 + s) for s >= 0 without the catastrophic cancellation the naive
// form suffers near 1.
inline double acosh1p(double s) {
  return std::log1p(s + std::sqrt(s * (s + 2.0)));
}

// sinh(t)/t with its removable singularity filled in by series below 1e-4.
inline double sinhc(double t) {
  if (t < 1e-4) {
    double t2 = t * t;
    return 1.0 + t2 / 6.0 * (1.0 + t2 / 20.0);
  }
  return std::sinh(t) / t;
}

// asinh(t)/t, the inverse companion of sinhc.
inline double asinhc(double t) {
  if (t < 1e-4) {
    double t2 = t * t;
    return 1.0 - t2 / 6.0 * (1.0 - 9.0 * t2 / 20.0);
  }
  return std::asinh(t) / t;
}

namespace detail {
inline void check_compatible(const FactorPoint& p, const FactorPoint& q) {
  if (p.dim() != q.dim()) {
    throw InputError("factor points have mismatched dimensions");
  }
  if (p.alpha() != q.alpha()) {
    throw InputError("factor points have mismatched curvatures");
  }
}

// sinh^2(sqrt(alpha) * d(p,q) / 2), computed in polar form:
//   sinh^2(sa*(r1-r2)/2) + sinh(sa*r1) * sinh(sa*r2) * |u1 - u2|^2 / 4
// with radii r_i = asinh(sa*|x_i|)/sa and unit directions u_i. Every term is
// nonnegative, so there is no catastrophic cancellation; the naive
// -x0*y0 + <x,y> form loses all precision between nearby points away from
// the origin. Exactly symmetric and exactly zero for bitwise-equal points.
inline double sinh_sq_half_dist(const FactorPoint& p, const FactorPoint& q) {
  const double sa = std::sqrt(p.alpha());
  const double nx = p.space_norm();
  const double ny = q.space_norm();
  const double dr = std::abs(std::asinh(sa * nx) - std::asinh(sa * ny));
  const double h = std::sinh(0.5 * dr);
  double m2 = 0.0;
  if (nx > 0.0 && ny > 0.0) {
    const auto& a = p.space();
    const auto& b = q.space();
    for (std::size_t i = 0; i < a.size(); ++i) {
      double d = a[i] / nx - b[i] / ny;
      m2 += d * d;
    }
    m2 *= 0.25;
  }
  return h * h + (sa * nx) * (sa * ny) * m2;
}
}  // namespace detail

// Minkowski inner product of the lifted points: -x0*y0 + <x, y>. Recovered
// from the polar form as -(1 + 2*sinh^2)/alpha so the self-product is an
// exact -1/alpha.
inline double minkowski_inner(const FactorPoint& p, const FactorPoint& q) {
  detail::check_compatible(p, q);
  return -(1.0 + 2.0 * detail::sinh_sq_half_dist(p, q)) / p.alpha();
}

// Geodesic distance alpha^{-1/2} * arccosh(-alpha * <p,q>), evaluated as
// 2 * asinh(sinh(d/2-term)) which stays accurate near coincident points.
inline double distance(const FactorPoint& p, const FactorPoint& q) {
  detail::check_compatible(p, q);
  double s = detail::sinh_sq_half_dist(p, q);
  return 2.0 * std::asinh(std::sqrt(s)) / std::sqrt(p.alpha());
}

// Exponential map at the base point (alpha^{-1/2}, 0, ..., 0). Radially
// isometric: distance(exp0(v), origin) = |v|.
inline FactorPoint exp0(const TangentVector& v, Curvature c) {
  double nsq = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError("exp0: non-finite tangent vector");
    nsq += x * x;
  }
  double t = std::sqrt(nsq);
  double g = sinhc(std::sqrt(c.alpha) * t);
  std::vector<double> space(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) space[i] = g * v[i];
  return FactorPoint(std::move(space), c);
}

// Inverse of exp0. Recovered from the space norm alone: |x| = sinh(sqrt(a)*r)/sqrt(a).
inline TangentVector log0(const FactorPoint& p) {
  double m = p.space_norm();
  double f = asinhc(std::sqrt(p.alpha()) * m);
  TangentVector v(p.space().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f * p.space()[i];
  return v;
}

}  // namespace hypf

#endif  // HYPF_LORENTZ_HPP_
