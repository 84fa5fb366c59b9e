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

#include "hypf/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "hypf/rng.hpp"

namespace hypf {

namespace {

// Plain Nelder-Mead minimizer. Deterministic given the initial simplex.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step, int iters) {
  const double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;
  std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  for (int it = 0; it < iters; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&fv](std::size_t a, std::size_t b) {
      return fv[a] < fv[b];
    });
    std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t c = 0; c < n; ++c) centroid[c] += simplex[i][c];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t c = 0; c < n; ++c) {
        p[c] = centroid[c] + t * (centroid[c] - simplex[worst][c]);
      }
      return p;
    };

    std::vector<double> refl = blend(kAlpha);
    double f_refl = f(refl);
    if (f_refl < fv[best]) {
      std::vector<double> exp_pt = blend(kGamma);
      double f_exp = f(exp_pt);
      if (f_exp < f_refl) {
        simplex[worst] = std::move(exp_pt);
        fv[worst] = f_exp;
      } else {
        simplex[worst] = std::move(refl);
        fv[worst] = f_refl;
      }
    } else if (f_refl < fv[second_worst]) {
      simplex[worst] = std::move(refl);
      fv[worst] = f_refl;
    } else {
      std::vector<double> contr = blend(-kRho);
      double f_contr = f(contr);
      if (f_contr < fv[worst]) {
        simplex[worst] = std::move(contr);
        fv[worst] = f_contr;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t c = 0; c < n; ++c) {
            simplex[i][c] = simplex[best][c] + kSigma * (simplex[i][c] - simplex[best][c]);
          }
          fv[i] = f(simplex[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (fv[i] < fv[best]) best = i;
  }
  return simplex[best];
}

struct Eval {
  double objective;                 // d(b, e)
  std::array<double, 5> residuals;  // |d(a,b)-1|, |d(b,c)-1|, |d(a,e)-1|, |d(e,c)-1|, |d(a,c)-2|
};

Eval evaluate(const std::vector<double>& x, int dim, Curvature c) {
  auto point = [&](int idx) {
    TangentVector v(x.begin() + idx * dim, x.begin() + (idx + 1) * dim);
    return exp0(v, c);
  };
  FactorPoint a = point(0), b = point(1), cc = point(2), e = point(3);
  Eval out;
  out.objective = distance(b, e);
  out.residuals = {std::abs(distance(a, b) - 1.0), std::abs(distance(b, cc) - 1.0),
                   std::abs(distance(a, e) - 1.0), std::abs(distance(e, cc) - 1.0),
                   std::abs(distance(a, cc) - 2.0)};
  return out;
}

}  // namespace

ObstructionReport midpoint_obstruction_witness(const ObstructionOptions& opts) {
  if (opts.dim < 2) throw InputError("obstruction witness: dim must be >= 2");
  const int dim = opts.dim;
  const Curvature curv(opts.alpha);
  const std::size_t nvars = static_cast<std::size_t>(4 * dim);

  Rng rng(opts.seed);

  std::vector<std::vector<double>> starts;
  if (opts.seed_midpoint) {
    // a and c one unit apart from the midpoint along the first axis, b and e
    // exactly at the midpoint (here: all centered at the origin).
    std::vector<double> mid(nvars, 0.0);
    mid[0] = -1.0;                               // a
    mid[static_cast<std::size_t>(2 * dim)] = 1.0;  // c
    starts.push_back(std::move(mid));
  }
  for (int s = 0; s < opts.starts; ++s) {
    std::vector<double> x(nvars);
    for (double& v : x) v = rng.normal() * 0.8;
    starts.push_back(std::move(x));
  }

  ObstructionReport report;
  report.residuals = {1e30, 1e30, 1e30, 1e30, 1e30};
  bool any_feasible = false;
  Eval best_overall{-1.0, {1e30, 1e30, 1e30, 1e30, 1e30}};
  std::vector<double> best_x;
  double best_infeasibility = 1e30;
  Eval best_infeasible_eval{0.0, {1e30, 1e30, 1e30, 1e30, 1e30}};

  for (const auto& start : starts) {
    std::vector<double> x = start;
    // Penalty schedule: maximize the objective under increasingly stiff
    // quadratic constraint penalties. The midpoint optimum is quartically
    // flat, so residuals settle near (1/2w)^(2/3); the final stage needs
    // w = 1e9 to push them under 1e-6.
    double weight = 1e5;
    for (int stage = 0; stage < 5; ++stage, weight *= 10.0) {
      auto f = [&](const std::vector<double>& p) {
        Eval ev = evaluate(p, dim, curv);
        double pen = 0.0;
        for (double r : ev.residuals) pen += r * r;
        return -ev.objective + weight * pen;
      };
      x = nelder_mead(f, x, stage == 0 ? 0.3 : 0.02, opts.stage_iters);
    }
    Eval ev = evaluate(x, dim, curv);
    double worst = *std::max_element(ev.residuals.begin(), ev.residuals.end());
    if (worst <= opts.constraint_tol) {
      any_feasible = true;
      ++report.feasible_starts;
      if (ev.objective > best_overall.objective) {
        best_overall = ev;
        best_x = x;
      }
    } else if (worst < best_infeasibility) {
      best_infeasibility = worst;
      best_infeasible_eval = ev;
    }
  }

  if (!any_feasible) {
    std::ostringstream os;
    os << "obstruction witness: no start satisfied the constraints; best residuals:";
    for (double r : best_infeasible_eval.residuals) os << ' ' << r;
    throw ContractError(os.str());
  }

  report.max_bd = best_overall.objective;
  report.residuals = best_overall.residuals;
  report.best_points.reserve(4);
  for (int p = 0; p < 4; ++p) {
    report.best_points.emplace_back(best_x.begin() + p * dim, best_x.begin() + (p + 1) * dim);
  }
  return report;
}

}  // namespace hypf
