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

#include "hypf/lorentz.hpp"

#include <cmath>

#include "doctest.h"
#include "hypf/rng.hpp"

using namespace hypf;

namespace {
FactorPoint random_point(Rng& rng, int d, double alpha, double max_radius) {
  TangentVector v(static_cast<std::size_t>(d));
  double nsq = 0.0;
  for (double& x : v) {
    x = rng.normal();
    nsq += x * x;
  }
  double r = rng.uniform(0.0, max_radius);
  double scale = (nsq > 0.0) ? r / std::sqrt(nsq) : 0.0;
  for (double& x : v) x *= scale;
  return exp0(v, Curvature(alpha));
}
}  // namespace

TEST_SUITE("lorentz") {

TEST_CASE("minkowski inner product at the origin") {
  auto o = FactorPoint::origin(2, Curvature(1.0));
  CHECK(minkowski_inner(o, o) == doctest::Approx(-1.0).epsilon(1e-12));

  FactorPoint q({0.75, 0.0}, Curvature(1.0));
  CHECK(q.time() == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(minkowski_inner(o, q) == doctest::Approx(-1.25).epsilon(1e-12));
}

TEST_CASE("minkowski inner product is symmetric and bounded by -1/alpha") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    double alpha = rng.uniform(0.2, 5.0);
    auto p = random_point(rng, 3, alpha, 3.0);
    auto q = random_point(rng, 3, alpha, 3.0);
    double pq = minkowski_inner(p, q);
    CHECK(pq == minkowski_inner(q, p));
    CHECK(pq <= -1.0 / alpha + 1e-9);
  }
}

TEST_CASE("mismatched inputs are rejected") {
  auto p = FactorPoint::origin(2, Curvature(1.0));
  auto q3 = FactorPoint::origin(3, Curvature(1.0));
  auto q_alpha = FactorPoint::origin(2, Curvature(2.0));
  CHECK_THROWS_AS(minkowski_inner(p, q3), InputError);
  CHECK_THROWS_AS(distance(p, q_alpha), InputError);
  CHECK_THROWS_AS(Curvature(-1.0), InputError);
  CHECK_THROWS_AS(Curvature(0.0), InputError);
}

TEST_CASE("distance examples") {
  auto o = FactorPoint::origin(2, Curvature(1.0));
  FactorPoint q({0.75, 0.0}, Curvature(1.0));
  CHECK(distance(o, o) == 0.0);
  CHECK(distance(q, q) == 0.0);
  CHECK(distance(o, q) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("distance scales as 1/sqrt(alpha) at fixed arccosh argument") {
  // alpha = 4 point with the same -alpha*<p,q> = 1.25 as the alpha = 1 pair.
  auto o4 = FactorPoint::origin(2, Curvature(4.0));
  double q0 = 1.25 / 4.0 / (0.5);  // -<o4,q> = q0 * 0.5 must equal 1.25/4
  double space = std::sqrt(q0 * q0 - 0.25);
  FactorPoint q4({space, 0.0}, Curvature(4.0));
  CHECK(distance(o4, q4) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("hyperboloid constraint holds for lifted and exponential points") {
  Rng rng(7);
  for (int rep = 0; rep < 300; ++rep) {
    double alpha = rng.uniform(0.1, 10.0);
    auto p = random_point(rng, 4, alpha, 8.0);
    CHECK(std::abs(alpha * minkowski_inner(p, p) + 1.0) <= 1e-9);
  }
}

TEST_CASE("metric axioms on random triples") {
  Rng rng(13);
  for (double alpha : {0.1, 1.0, 10.0}) {
    for (int d : {2, 8}) {
      for (int rep = 0; rep < 1000; ++rep) {
        auto a = random_point(rng, d, alpha, 4.0);
        auto b = random_point(rng, d, alpha, 4.0);
        auto c = random_point(rng, d, alpha, 4.0);
        double ab = distance(a, b), ba = distance(b, a);
        double bc = distance(b, c), ac = distance(a, c);
        CHECK(ab == ba);  // exact symmetry
        CHECK(ab + bc - ac >= -1e-9);
        CHECK(ab >= 0.0);
      }
    }
  }
}

TEST_CASE("exp0 maps zero to the origin and is radially isometric") {
  auto p = exp0(TangentVector{0.0, 0.0}, Curvature(1.0));
  CHECK(p.space_norm() == 0.0);

  Rng rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    double alpha = rng.uniform(0.1, 10.0);
    double r = rng.uniform(0.0, 10.0);
    TangentVector v{r, 0.0, 0.0};
    auto x = exp0(v, Curvature(alpha));
    auto o = FactorPoint::origin(3, Curvature(alpha));
    CHECK(distance(x, o) == doctest::Approx(r).epsilon(1e-9));
  }
}

TEST_CASE("exp0/log0 are mutually inverse") {
  Rng rng(19);
  for (double alpha : {0.1, 1.0, 10.0}) {
    for (int rep = 0; rep < 200; ++rep) {
      int d = 2 + static_cast<int>(rng.uniform_index(5));
      TangentVector v(static_cast<std::size_t>(d));
      for (double& x : v) x = rng.normal();
      double n = 0.0;
      for (double x : v) n += x * x;
      double r = rng.uniform(0.0, 10.0);
      if (n > 0) {
        for (double& x : v) x *= r / std::sqrt(n);
      }
      auto p = exp0(v, Curvature(alpha));
      auto w = log0(p);
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(w[i] == doctest::Approx(v[i]).epsilon(1e-7));
      }
      // |log0(p)| equals the distance from the origin.
      double wn = 0.0;
      for (double x : w) wn += x * x;
      auto o = FactorPoint::origin(d, Curvature(alpha));
      CHECK(std::sqrt(wn) == doctest::Approx(distance(p, o)).epsilon(1e-7));
    }
  }
  SUBCASE("log0 of the origin is zero") {
    auto v = log0(FactorPoint::origin(3, Curvature(2.0)));
    for (double x : v) CHECK(x == 0.0);
  }
}

TEST_CASE("radial geodesics are parameterized by arc length") {
  Rng rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    double alpha = rng.uniform(0.1, 10.0);
    TangentVector u{rng.normal(), rng.normal()};
    double n = std::sqrt(u[0] * u[0] + u[1] * u[1]);
    u[0] /= n;
    u[1] /= n;
    double t = rng.uniform(0.0, 6.0), s = rng.uniform(0.0, 6.0);
    auto x = exp0(TangentVector{t * u[0], t * u[1]}, Curvature(alpha));
    auto y = exp0(TangentVector{s * u[0], s * u[1]}, Curvature(alpha));
    CHECK(distance(x, y) == doctest::Approx(std::abs(t - s)).epsilon(1e-7));
  }
}

TEST_CASE("exp0 rejects non-finite input") {
  CHECK_THROWS_AS(exp0(TangentVector{std::nan(""), 0.0}, Curvature(1.0)), InputError);
}

}  // TEST_SUITE
