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

#include "hypf/losses.hpp"

#include <algorithm>
#include <cmath>

#include "hypf/kernels.hpp"

namespace hypf {

namespace {

constexpr double kApexEps = 1e-8;       // general side treated as apex below this norm
constexpr double kCoincidentS = 1e-12;  // sinh^2(d/2) below which a pair has no angle
constexpr double kGradS = 0.5e-9;       // floor on s inside gradients (z - 1 >= 1e-9)

double dsinhc(double z) {
  if (z < 1e-4) return z / 3.0 + z * z * z / 30.0;
  return (z * std::cosh(z) - std::sinh(z)) / (z * z);
}

// ----- shared per-factor entailment term -----

struct EntailTerm {
  bool active = false;  // hinge engaged
  bool defined = false; // angle well-defined (not apex / coincident)
  double value = 0.0;
  double phi = 0.0, omega = 0.0, cphi = 0.0, q = 0.0;
  double z = 0.0, num = 0.0, den = 0.0, w = 0.0;  // w = sqrt(s(1+s))
};

EntailTerm entail_factor(double nx, double ny, double x0, double y0, double s,
                         double alpha, double eta, double K) {
  EntailTerm t;
  if (ny <= kApexEps || s <= kCoincidentS) return t;
  t.defined = true;
  double sa = std::sqrt(alpha);
  t.q = 2.0 * K / (sa * ny);
  t.omega = (t.q >= 1.0) ? kHalfPi : std::asin(t.q);
  t.z = 1.0 + 2.0 * s;
  t.num = x0 - y0 * t.z;
  t.w = std::sqrt(s * (1.0 + s));
  t.den = 2.0 * ny * t.w;
  t.cphi = std::clamp(t.num / t.den, -1.0, 1.0);
  t.phi = std::acos(t.cphi);
  double hinge = t.phi - eta * t.omega;
  if (hinge > 0.0) {
    t.active = true;
    t.value = hinge;
  }
  return t;
}

// ----- lifted stream caches for the gradient path -----

struct FactorCache {
  std::vector<double> u;   // SoA [coord][row], scaled tangent
  std::vector<double> xs;  // SoA [coord][row], space coordinates
  std::vector<double> t, st, nx, x0, g, dg;  // per row
  // adjoints
  std::vector<double> dxs;
  std::vector<double> dnx, dst, dx0;
};

struct StreamCache {
  Role role = Role::image;
  double cval = 1.0;
  std::vector<int> entities;
  int n = 0;
  std::vector<FactorCache> fac;
};

StreamCache lift_stream(const EmbeddingTable& table, const TrainScalars& scalars,
                        std::vector<int> entities) {
  const ProductShape shape = table.shape();
  const int k = shape.k, d = shape.d;
  StreamCache s;
  s.entities = std::move(entities);
  s.n = static_cast<int>(s.entities.size());
  if (s.n == 0) throw InputError("loss: empty batch");
  s.role = table.role(s.entities.front());
  s.cval = scalars.c_for(s.role);
  s.fac.resize(static_cast<std::size_t>(k));
  const std::size_t n = static_cast<std::size_t>(s.n);
  for (int i = 0; i < k; ++i) {
    auto& f = s.fac[static_cast<std::size_t>(i)];
    f.u.assign(static_cast<std::size_t>(d) * n, 0.0);
    f.xs.assign(static_cast<std::size_t>(d) * n, 0.0);
    f.t.assign(n, 0.0);
    f.st.assign(n, 0.0);
    f.nx.assign(n, 0.0);
    f.x0.assign(n, 0.0);
    f.g.assign(n, 0.0);
    f.dg.assign(n, 0.0);
    f.dxs.assign(static_cast<std::size_t>(d) * n, 0.0);
    f.dnx.assign(n, 0.0);
    f.dst.assign(n, 0.0);
    f.dx0.assign(n, 0.0);
  }
  for (int r = 0; r < s.n; ++r) {
    const auto params = table.params(s.entities[static_cast<std::size_t>(r)]);
    for (int i = 0; i < k; ++i) {
      auto& f = s.fac[static_cast<std::size_t>(i)];
      const double alpha = scalars.alpha[static_cast<std::size_t>(i)];
      const double sa = std::sqrt(alpha);
      double tsq = 0.0;
      for (int c = 0; c < d; ++c) {
        double uc = s.cval * params[static_cast<std::size_t>(i * d + c)];
        if (!std::isfinite(uc)) {
          throw DomainError("loss: non-finite parameter at entity " +
                            table.id_of(s.entities[static_cast<std::size_t>(r)]) +
                            " factor " + std::to_string(i));
        }
        f.u[static_cast<std::size_t>(c) * n + static_cast<std::size_t>(r)] = uc;
        tsq += uc * uc;
      }
      double t = std::sqrt(tsq);
      double st = sa * t;
      double g = sinhc(st);
      f.t[static_cast<std::size_t>(r)] = t;
      f.st[static_cast<std::size_t>(r)] = st;
      f.g[static_cast<std::size_t>(r)] = g;
      f.dg[static_cast<std::size_t>(r)] = dsinhc(st);
      for (int c = 0; c < d; ++c) {
        f.xs[static_cast<std::size_t>(c) * n + static_cast<std::size_t>(r)] =
            g * f.u[static_cast<std::size_t>(c) * n + static_cast<std::size_t>(r)];
      }
      double nx = g * t;  // sinh(st)/sa
      f.nx[static_cast<std::size_t>(r)] = nx;
      f.x0[static_cast<std::size_t>(r)] = std::sqrt(1.0 / alpha + nx * nx);
    }
  }
  return s;
}

// Factor distance from cached quantities; ang is clamped at 0.
struct FactorDist {
  double s, dist, dot, ang;
};

FactorDist factor_distance(const FactorCache& a, int ra, const FactorCache& b, int rb,
                           double alpha, double dot) {
  FactorDist out;
  out.dot = dot;
  double sa = std::sqrt(alpha);
  double h = std::sinh(0.5 * (a.st[static_cast<std::size_t>(ra)] - b.st[static_cast<std::size_t>(rb)]));
  out.ang = 0.5 * alpha * (a.nx[static_cast<std::size_t>(ra)] * b.nx[static_cast<std::size_t>(rb)] - dot);
  if (out.ang < 0.0) out.ang = 0.0;
  out.s = h * h + out.ang;
  out.dist = 2.0 * std::asinh(std::sqrt(out.s)) / sa;
  return out;
}

// Reverse-mode step for one factor-distance term. Accumulates into the row
// adjoints of both sides and into dalpha.
void backprop_factor_distance(FactorCache& a, int ra, FactorCache& b, int rb,
                              double alpha, const FactorDist& fd, double wD,
                              double& dalpha) {
  if (wD == 0.0) return;
  const std::size_t ia = static_cast<std::size_t>(ra), ib = static_cast<std::size_t>(rb);
  double sa = std::sqrt(alpha);
  double s_eff = std::max(fd.s, kGradS);
  double ds = wD / (sa * std::sqrt(s_eff * (1.0 + s_eff)));
  dalpha += wD * (-fd.dist / (2.0 * alpha));

  double delta = a.st[ia] - b.st[ib];
  double hterm = 0.5 * std::sinh(delta);
  a.dst[ia] += ds * hterm;
  b.dst[ib] -= ds * hterm;
  if (fd.ang > 0.0) {
    a.dnx[ia] += ds * 0.5 * alpha * b.nx[ib];
    b.dnx[ib] += ds * 0.5 * alpha * a.nx[ia];
    dalpha += ds * 0.5 * (a.nx[ia] * b.nx[ib] - fd.dot);
    double ddot = -ds * 0.5 * alpha;
    const std::size_t na = a.t.size(), nb = b.t.size();
    const int d = static_cast<int>(a.u.size() / na);
    for (int c = 0; c < d; ++c) {
      a.dxs[static_cast<std::size_t>(c) * na + ia] += ddot * b.xs[static_cast<std::size_t>(c) * nb + ib];
      b.dxs[static_cast<std::size_t>(c) * nb + ib] += ddot * a.xs[static_cast<std::size_t>(c) * na + ia];
    }
  }
}

// Collapses row adjoints (dxs, dnx, dst, dx0) down to parameter and scalar
// gradients for one stream.
void collapse_stream(const EmbeddingTable& table, const TrainScalars& scalars,
                     StreamCache& s, Gradients& out) {
  const ProductShape shape = table.shape();
  const int k = shape.k, d = shape.d;
  const std::size_t n = static_cast<std::size_t>(s.n);
  double* dlogc = (s.role == Role::image || s.role == Role::image_box)
                      ? &out.log_c_img
                      : &out.log_c_txt;
  for (int r = 0; r < s.n; ++r) {
    const std::size_t ir = static_cast<std::size_t>(r);
    int entity = s.entities[ir];
    auto it = out.table.find(entity);
    if (it == out.table.end()) {
      it = out.table.emplace(entity, std::vector<double>(static_cast<std::size_t>(k) * d, 0.0)).first;
    }
    auto& dv = it->second;
    for (int i = 0; i < k; ++i) {
      auto& f = s.fac[static_cast<std::size_t>(i)];
      const double alpha = scalars.alpha[static_cast<std::size_t>(i)];
      const double sa = std::sqrt(alpha);
      double dnx = f.dnx[ir];
      double dst = f.dst[ir];
      // x0 -> nx, alpha
      if (f.dx0[ir] != 0.0) {
        dnx += f.dx0[ir] * f.nx[ir] / f.x0[ir];
        out.alpha[static_cast<std::size_t>(i)] += f.dx0[ir] * (-1.0 / (2.0 * alpha * alpha * f.x0[ir]));
      }
      // nx = sinh(st)/sa -> st, alpha
      if (dnx != 0.0) {
        dst += dnx * std::cosh(f.st[ir]) / sa;
        out.alpha[static_cast<std::size_t>(i)] += -dnx * f.nx[ir] / (2.0 * alpha);
      }
      // xs = G(st) * u -> u, st
      double u_dot_dxs = 0.0;
      for (int c = 0; c < d; ++c) {
        u_dot_dxs += f.u[static_cast<std::size_t>(c) * n + ir] * f.dxs[static_cast<std::size_t>(c) * n + ir];
      }
      dst += u_dot_dxs * f.dg[ir];
      // st = sa * t -> t, alpha
      double dt = dst * sa;
      out.alpha[static_cast<std::size_t>(i)] += dst * f.t[ir] / (2.0 * sa);
      // u adjoint: from xs (G * dxs) and from t (u/t).
      for (int c = 0; c < d; ++c) {
        double du = f.g[ir] * f.dxs[static_cast<std::size_t>(c) * n + ir];
        if (f.t[ir] > 1e-300) {
          du += dt * f.u[static_cast<std::size_t>(c) * n + ir] / f.t[ir];
        }
        if (du != 0.0) {
          dv[static_cast<std::size_t>(i * d + c)] += s.cval * du;
          *dlogc += f.u[static_cast<std::size_t>(c) * n + ir] * du;
        }
      }
    }
  }
}

// ----- InfoNCE over a distance matrix block -----

struct PairBlock {
  int n = 0;  // square
  std::vector<std::vector<double>> dfac;  // k matrices of factor distances
  std::vector<std::vector<double>> dots;  // k matrices of <xs, ys>
  std::vector<double> davg;
};

PairBlock build_pair_block(const StreamCache& a, const StreamCache& b,
                           const TrainScalars& scalars, ProductMetric metric) {
  const int k = static_cast<int>(a.fac.size());
  const int n = a.n;
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const int d = static_cast<int>(a.fac[0].u.size() / static_cast<std::size_t>(n));
  PairBlock blk;
  blk.n = n;
  blk.dfac.assign(static_cast<std::size_t>(k), std::vector<double>(nn, 0.0));
  blk.dots.assign(static_cast<std::size_t>(k), std::vector<double>(nn, 0.0));
  blk.davg.assign(nn, 0.0);
  const auto& ops = kernels::active_ops();
  for (int i = 0; i < k; ++i) {
    double alpha = scalars.alpha[static_cast<std::size_t>(i)];
    auto& dots = blk.dots[static_cast<std::size_t>(i)];
    ops.cross_dot(a.fac[static_cast<std::size_t>(i)].xs.data(), static_cast<std::size_t>(n),
                  b.fac[static_cast<std::size_t>(i)].xs.data(), static_cast<std::size_t>(n),
                  static_cast<std::size_t>(d), dots.data());
    auto& df = blk.dfac[static_cast<std::size_t>(i)];
    for (int ra = 0; ra < n; ++ra) {
      for (int rb = 0; rb < n; ++rb) {
        std::size_t e = static_cast<std::size_t>(ra) * static_cast<std::size_t>(n) + static_cast<std::size_t>(rb);
        df[e] = factor_distance(a.fac[static_cast<std::size_t>(i)], ra,
                                b.fac[static_cast<std::size_t>(i)], rb, alpha, dots[e]).dist;
      }
    }
  }
  for (std::size_t e = 0; e < nn; ++e) {
    if (metric == ProductMetric::l1) {
      double sum = 0.0;
      for (int i = 0; i < k; ++i) sum += blk.dfac[static_cast<std::size_t>(i)][e];
      blk.davg[e] = sum / k;
    } else {
      double sq = 0.0;
      for (int i = 0; i < k; ++i) {
        double v = blk.dfac[static_cast<std::size_t>(i)][e];
        sq += v * v;
      }
      blk.davg[e] = std::sqrt(sq) / k;
    }
  }
  return blk;
}

// InfoNCE with queries along rows (transpose = false) or columns (true).
// Accumulates davg adjoints and the tau gradient with weight w.
double infonce_direction(const PairBlock& blk, bool transpose, double tau, double w,
                         std::vector<double>* d_davg, double* dtau) {
  const int n = blk.n;
  auto at = [&](int q, int c) {
    return transpose ? blk.davg[static_cast<std::size_t>(c) * static_cast<std::size_t>(n) + static_cast<std::size_t>(q)]
                     : blk.davg[static_cast<std::size_t>(q) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)];
  };
  auto adj = [&](int q, int c) -> double& {
    return transpose ? (*d_davg)[static_cast<std::size_t>(c) * static_cast<std::size_t>(n) + static_cast<std::size_t>(q)]
                     : (*d_davg)[static_cast<std::size_t>(q) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)];
  };
  double total = 0.0;
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    double mx = -1e300;
    for (int c = 0; c < n; ++c) mx = std::max(mx, -at(q, c) / tau);
    double sum = 0.0;
    for (int c = 0; c < n; ++c) {
      p[static_cast<std::size_t>(c)] = std::exp(-at(q, c) / tau - mx);
      sum += p[static_cast<std::size_t>(c)];
    }
    double lse = mx + std::log(sum);
    total += at(q, q) / tau + lse;
    if (d_davg != nullptr) {
      double mean_d = 0.0;
      for (int c = 0; c < n; ++c) {
        double pc = p[static_cast<std::size_t>(c)] / sum;
        adj(q, c) += w * ((c == q ? 1.0 : 0.0) - pc) / tau;
        mean_d += pc * at(q, c);
      }
      if (dtau != nullptr) *dtau += w * (mean_d - at(q, q)) / (tau * tau);
    }
  }
  return total;
}

void backprop_pair_block(StreamCache& a, StreamCache& b, const TrainScalars& scalars,
                         ProductMetric metric, const PairBlock& blk,
                         const std::vector<double>& d_davg, Gradients& out) {
  const int k = static_cast<int>(a.fac.size());
  const int n = blk.n;
  for (int ra = 0; ra < n; ++ra) {
    for (int rb = 0; rb < n; ++rb) {
      std::size_t e = static_cast<std::size_t>(ra) * static_cast<std::size_t>(n) + static_cast<std::size_t>(rb);
      double g = d_davg[e];
      if (g == 0.0) continue;
      double r = 0.0;
      if (metric == ProductMetric::l2) {
        for (int i = 0; i < k; ++i) {
          double v = blk.dfac[static_cast<std::size_t>(i)][e];
          r += v * v;
        }
        r = std::sqrt(r);
      }
      for (int i = 0; i < k; ++i) {
        double wD;
        if (metric == ProductMetric::l1) {
          wD = g / k;
        } else {
          wD = (r > 0.0) ? g * blk.dfac[static_cast<std::size_t>(i)][e] / (k * r) : 0.0;
        }
        if (wD == 0.0) continue;
        double alpha = scalars.alpha[static_cast<std::size_t>(i)];
        FactorDist fd = factor_distance(a.fac[static_cast<std::size_t>(i)], ra,
                                        b.fac[static_cast<std::size_t>(i)], rb, alpha,
                                        blk.dots[static_cast<std::size_t>(i)][e]);
        backprop_factor_distance(a.fac[static_cast<std::size_t>(i)], ra,
                                 b.fac[static_cast<std::size_t>(i)], rb, alpha, fd, wD,
                                 out.alpha[static_cast<std::size_t>(i)]);
      }
    }
  }
}

// ----- entailment on cached streams -----

double entailment_pair_cached(StreamCache& x, int rx, StreamCache& y, int ry,
                              double eta, const TrainScalars& scalars, double grad_weight,
                              Gradients* out) {
  const int k = static_cast<int>(x.fac.size());
  const std::size_t nx_rows = static_cast<std::size_t>(x.n), ny_rows = static_cast<std::size_t>(y.n);
  const int d = static_cast<int>(x.fac[0].u.size() / nx_rows);
  double loss = 0.0;
  for (int i = 0; i < k; ++i) {
    auto& fx = x.fac[static_cast<std::size_t>(i)];
    auto& fy = y.fac[static_cast<std::size_t>(i)];
    const std::size_t ix = static_cast<std::size_t>(rx), iy = static_cast<std::size_t>(ry);
    double alpha = scalars.alpha[static_cast<std::size_t>(i)];
    double dot = 0.0;
    for (int c = 0; c < d; ++c) {
      dot += fx.xs[static_cast<std::size_t>(c) * nx_rows + ix] * fy.xs[static_cast<std::size_t>(c) * ny_rows + iy];
    }
    FactorDist fd = factor_distance(fx, rx, fy, ry, alpha, dot);
    EntailTerm term = entail_factor(fx.nx[ix], fy.nx[iy], fx.x0[ix], fy.x0[iy], fd.s,
                                    alpha, eta, scalars.cone.K);
    if (!term.active) continue;
    loss += term.value / k;
    if (out == nullptr) continue;

    double& dalpha = out->alpha[static_cast<std::size_t>(i)];
    double wphi = grad_weight / k;
    double womega = -grad_weight * eta / k;
    // phi = acos(num / den)
    double one_minus_c2 = std::max(1.0 - term.cphi * term.cphi, tolerances::grad_boundary);
    double dc = -wphi / std::sqrt(one_minus_c2);
    double dnum = dc / term.den;
    double dden = -dc * term.cphi / term.den;
    // num = x0 - y0 * (1 + 2s)
    fx.dx0[ix] += dnum;
    fy.dx0[iy] += -dnum * term.z;
    double ds = -dnum * 2.0 * fy.x0[iy];
    // den = 2 * ny * sqrt(s(1+s))
    fy.dnx[iy] += dden * 2.0 * term.w;
    ds += dden * fy.nx[iy] * (1.0 + 2.0 * fd.s) / term.w;
    // omega = asin(min(1, 2K / (sa * ny)))
    if (term.q < 1.0) {
      double one_minus_q2 = std::max(1.0 - term.q * term.q, tolerances::grad_boundary);
      double dq = womega / std::sqrt(one_minus_q2);
      fy.dnx[iy] += dq * (-term.q / fy.nx[iy]);
      dalpha += dq * (-term.q / (2.0 * alpha));
    }
    // s = sinh^2((st_x - st_y)/2) + ang
    double delta = fx.st[ix] - fy.st[iy];
    double hterm = 0.5 * std::sinh(delta);
    fx.dst[ix] += ds * hterm;
    fy.dst[iy] -= ds * hterm;
    if (fd.ang > 0.0) {
      fx.dnx[ix] += ds * 0.5 * alpha * fy.nx[iy];
      fy.dnx[iy] += ds * 0.5 * alpha * fx.nx[ix];
      dalpha += ds * 0.5 * (fx.nx[ix] * fy.nx[iy] - dot);
      double ddot = -ds * 0.5 * alpha;
      for (int c = 0; c < d; ++c) {
        fx.dxs[static_cast<std::size_t>(c) * nx_rows + ix] += ddot * fy.xs[static_cast<std::size_t>(c) * ny_rows + iy];
        fy.dxs[static_cast<std::size_t>(c) * ny_rows + iy] += ddot * fx.xs[static_cast<std::size_t>(c) * nx_rows + ix];
      }
    }
  }
  return loss;
}

std::vector<int> collect(const Batch& batch, int BatchItem::* field, const EmbeddingTable& table) {
  std::vector<int> out;
  out.reserve(batch.size());
  for (const auto& item : batch) {
    int e = item.*field;
    if (e < 0 || e >= table.size()) throw InputError("batch references an unknown entity");
    out.push_back(e);
  }
  return out;
}

}  // namespace

ProductMetric metric_from_name(const std::string& name) {
  if (name == "l1") return ProductMetric::l1;
  if (name == "l2") return ProductMetric::l2;
  throw InputError("unknown product metric: " + name + " (expected l1 or l2)");
}

const char* metric_name(ProductMetric m) { return m == ProductMetric::l1 ? "l1" : "l2"; }

std::vector<double> avg_distance_matrix(std::span<const ProductPoint> queries,
                                        std::span<const ProductPoint> candidates,
                                        ProductMetric metric) {
  if (queries.empty() || candidates.empty()) throw InputError("distance matrix: empty input");
  const int k = queries[0].k(), d = queries[0].d();
  for (const auto& p : queries) detail::check_shapes(p, queries[0]);
  for (const auto& p : candidates) detail::check_shapes(p, queries[0]);
  const std::size_t nq = queries.size(), nc = candidates.size();
  std::vector<double> out(nq * nc, 0.0);
  std::vector<double> qx(static_cast<std::size_t>(d) * nq), cx(static_cast<std::size_t>(d) * nc);
  std::vector<double> qn(nq), qst(nq), cn(nc), cst(nc);
  std::vector<double> dots(nq * nc);
  const auto& ops = kernels::active_ops();
  for (int i = 0; i < k; ++i) {
    const double alpha = queries[0].factor(i).alpha();
    const double sa = std::sqrt(alpha);
    for (std::size_t r = 0; r < nq; ++r) {
      const auto& f = queries[r].factor(i);
      for (int c = 0; c < d; ++c) qx[static_cast<std::size_t>(c) * nq + r] = f.space()[static_cast<std::size_t>(c)];
      qn[r] = f.space_norm();
      qst[r] = std::asinh(sa * qn[r]);
    }
    for (std::size_t r = 0; r < nc; ++r) {
      const auto& f = candidates[r].factor(i);
      for (int c = 0; c < d; ++c) cx[static_cast<std::size_t>(c) * nc + r] = f.space()[static_cast<std::size_t>(c)];
      cn[r] = f.space_norm();
      cst[r] = std::asinh(sa * cn[r]);
    }
    ops.cross_dot(qx.data(), nq, cx.data(), nc, static_cast<std::size_t>(d), dots.data());
    for (std::size_t a = 0; a < nq; ++a) {
      for (std::size_t b = 0; b < nc; ++b) {
        double h = std::sinh(0.5 * (qst[a] - cst[b]));
        double ang = 0.5 * alpha * (qn[a] * cn[b] - dots[a * nc + b]);
        if (ang < 0.0) ang = 0.0;
        double s = h * h + ang;
        double di = 2.0 * std::asinh(std::sqrt(s)) / sa;
        if (metric == ProductMetric::l1) {
          out[a * nc + b] += di / k;
        } else {
          out[a * nc + b] += di * di;  // squared until the final pass
        }
      }
    }
  }
  if (metric == ProductMetric::l2) {
    for (double& v : out) v = std::sqrt(v) / k;
  }
  return out;
}

double contrastive_nll(std::span<const double> avg_dist, int n, double tau) {
  if (n < 1 || avg_dist.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw InputError("contrastive_nll: bad matrix size");
  }
  if (!(tau > 0.0)) throw InputError("contrastive_nll: tau must be positive");
  double total = 0.0;
  for (int b = 0; b < n; ++b) {
    double mx = -1e300;
    for (int a = 0; a < n; ++a) {
      mx = std::max(mx, -avg_dist[static_cast<std::size_t>(b) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] / tau);
    }
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      sum += std::exp(-avg_dist[static_cast<std::size_t>(b) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] / tau - mx);
    }
    total += avg_dist[static_cast<std::size_t>(b) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)] / tau + mx + std::log(sum);
  }
  return total;
}

double contrastive_loss(std::span<const ProductPoint> x, std::span<const ProductPoint> y,
                        double tau, ProductMetric metric) {
  if (x.size() != y.size()) throw InputError("contrastive_loss: batch size mismatch");
  if (x.empty()) throw InputError("contrastive_loss: empty batch");
  auto dm = avg_distance_matrix(x, y, metric);
  return contrastive_nll(dm, static_cast<int>(x.size()), tau);
}

double entailment_pair_loss(const ProductPoint& specific, const ProductPoint& general,
                            double eta, const TrainScalars& scalars) {
  detail::check_shapes(specific, general);
  const int k = specific.k();
  double loss = 0.0;
  for (int i = 0; i < k; ++i) {
    const auto& x = specific.factor(i);
    const auto& y = general.factor(i);
    double s = detail::sinh_sq_half_dist(x, y);
    EntailTerm term = entail_factor(x.space_norm(), y.space_norm(), x.time(), y.time(), s,
                                    x.alpha(), eta, scalars.cone.K);
    loss += term.value / k;
  }
  return loss;
}

namespace {
std::vector<ProductPoint> lift_all(const Batch& batch, int BatchItem::* field,
                                   const EmbeddingTable& table, const TrainScalars& scalars) {
  std::vector<ProductPoint> out;
  out.reserve(batch.size());
  for (const auto& item : batch) out.push_back(table.lift(item.*field, scalars));
  return out;
}
}  // namespace

double contrastive_total(const Batch& batch, const EmbeddingTable& table,
                         const TrainScalars& scalars, ProductMetric metric) {
  if (batch.empty()) throw InputError("contrastive_total: empty batch");
  auto img = lift_all(batch, &BatchItem::image, table, scalars);
  auto txt = lift_all(batch, &BatchItem::text, table, scalars);
  auto ibx = lift_all(batch, &BatchItem::image_box, table, scalars);
  auto tbx = lift_all(batch, &BatchItem::text_box, table, scalars);
  double tau = scalars.tau_temp;
  return 0.25 * (contrastive_loss(img, txt, tau, metric) + contrastive_loss(txt, img, tau, metric) +
                 contrastive_loss(ibx, tbx, tau, metric) + contrastive_loss(tbx, ibx, tau, metric));
}

double entailment_total(const Batch& batch, const EmbeddingTable& table,
                        const TrainScalars& scalars) {
  if (batch.empty()) throw InputError("entailment_total: empty batch");
  double total = 0.0;
  for (const auto& item : batch) {
    auto img = table.lift(item.image, scalars);
    auto txt = table.lift(item.text, scalars);
    auto ibx = table.lift(item.image_box, scalars);
    auto tbx = table.lift(item.text_box, scalars);
    total += entailment_pair_loss(img, txt, scalars.eta_inter, scalars);
    total += entailment_pair_loss(ibx, tbx, scalars.eta_inter, scalars);
    total += entailment_pair_loss(img, ibx, scalars.eta_intra, scalars);
    total += entailment_pair_loss(txt, tbx, scalars.eta_intra, scalars);
  }
  return total;
}

LossValue overall_loss(const Batch& batch, const EmbeddingTable& table,
                       const TrainScalars& scalars, ProductMetric metric) {
  LossValue v;
  v.contrastive = contrastive_total(batch, table, scalars, metric);
  v.entailment = entailment_total(batch, table, scalars);
  v.overall = v.contrastive + scalars.gamma * v.entailment;
  return v;
}

LossValue loss_gradient(const Batch& batch, const EmbeddingTable& table,
                        const TrainScalars& scalars, Gradients& out, ProductMetric metric) {
  if (batch.empty()) throw InputError("loss_gradient: empty batch");
  const int k = table.shape().k;
  out.table.clear();
  out.tau = 0.0;
  out.log_c_img = 0.0;
  out.log_c_txt = 0.0;
  out.alpha.assign(static_cast<std::size_t>(k), 0.0);

  StreamCache img = lift_stream(table, scalars, collect(batch, &BatchItem::image, table));
  StreamCache txt = lift_stream(table, scalars, collect(batch, &BatchItem::text, table));
  StreamCache ibx = lift_stream(table, scalars, collect(batch, &BatchItem::image_box, table));
  StreamCache tbx = lift_stream(table, scalars, collect(batch, &BatchItem::text_box, table));

  LossValue v;
  const double tau = scalars.tau_temp;
  const int n = static_cast<int>(batch.size());
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);

  // Contrastive: (I,T) and (I_box,T_box) blocks, each in both directions.
  {
    PairBlock blk = build_pair_block(img, txt, scalars, metric);
    std::vector<double> d_davg(nn, 0.0);
    double c1 = infonce_direction(blk, false, tau, 0.25, &d_davg, &out.tau);
    double c2 = infonce_direction(blk, true, tau, 0.25, &d_davg, &out.tau);
    backprop_pair_block(img, txt, scalars, metric, blk, d_davg, out);
    v.contrastive += 0.25 * (c1 + c2);
  }
  {
    PairBlock blk = build_pair_block(ibx, tbx, scalars, metric);
    std::vector<double> d_davg(nn, 0.0);
    double c1 = infonce_direction(blk, false, tau, 0.25, &d_davg, &out.tau);
    double c2 = infonce_direction(blk, true, tau, 0.25, &d_davg, &out.tau);
    backprop_pair_block(ibx, tbx, scalars, metric, blk, d_davg, out);
    v.contrastive += 0.25 * (c1 + c2);
  }

  // Entailment pairs, gradient-weighted by gamma through the overall sum.
  const double g = scalars.gamma;
  for (int b = 0; b < n; ++b) {
    v.entailment += entailment_pair_cached(img, b, txt, b, scalars.eta_inter, scalars, g, &out);
    v.entailment += entailment_pair_cached(ibx, b, tbx, b, scalars.eta_inter, scalars, g, &out);
    v.entailment += entailment_pair_cached(img, b, ibx, b, scalars.eta_intra, scalars, g, &out);
    v.entailment += entailment_pair_cached(txt, b, tbx, b, scalars.eta_intra, scalars, g, &out);
  }

  collapse_stream(table, scalars, img, out);
  collapse_stream(table, scalars, txt, out);
  collapse_stream(table, scalars, ibx, out);
  collapse_stream(table, scalars, tbx, out);

  v.overall = v.contrastive + scalars.gamma * v.entailment;
  return v;
}

}  // namespace hypf
