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

#include "hypf/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "hypf/cones.hpp"
#include "hypf/rng.hpp"

namespace hypf {

namespace {

struct Setup {
  EmbeddingTable table;
  TrainScalars scalars;
  Batch batch;
};

Setup make_setup(Rng& rng, const GradCheckOptions& opts) {
  int k = opts.ks[static_cast<std::size_t>(rng.uniform_index(opts.ks.size()))];
  int d = opts.ds[static_cast<std::size_t>(rng.uniform_index(opts.ds.size()))];
  Setup s{EmbeddingTable(ProductShape(k, d)), TrainScalars::defaults(k), {}};
  for (int i = 0; i < k; ++i) {
    s.scalars.alpha[static_cast<std::size_t>(i)] =
        opts.alpha_choices[static_cast<std::size_t>(rng.uniform_index(opts.alpha_choices.size()))];
  }
  s.scalars.tau_temp = rng.uniform(0.08, 0.5);
  s.scalars.log_c_img = rng.uniform(-0.5, 0.5);
  s.scalars.log_c_txt = rng.uniform(-0.5, 0.5);
  s.scalars.gamma = rng.uniform(0.1, 0.6);

  for (int b = 0; b < opts.batch; ++b) {
    BatchItem item;
    item.image = s.table.add_entity("img:" + std::to_string(b), Role::image);
    item.text = s.table.add_entity("txt:" + std::to_string(b), Role::text);
    item.image_box = s.table.add_entity("ibx:" + std::to_string(b), Role::image_box);
    item.text_box = s.table.add_entity("tbx:" + std::to_string(b), Role::text_box);
    s.batch.push_back(item);
  }
  for (int e = 0; e < s.table.size(); ++e) {
    auto p = s.table.params(e);
    double cval = s.scalars.c_for(s.table.role(e));
    for (int i = 0; i < k; ++i) {
      // Per-factor tangent norms well away from the origin and from each
      // other, scaled down for strongly curved factors.
      double target = rng.uniform(0.35, 1.1) / std::sqrt(s.scalars.alpha[static_cast<std::size_t>(i)]);
      double nsq = 0.0;
      for (int c = 0; c < d; ++c) {
        p[static_cast<std::size_t>(i * d + c)] = rng.normal();
        nsq += p[static_cast<std::size_t>(i * d + c)] * p[static_cast<std::size_t>(i * d + c)];
      }
      double scale = target / (cval * std::sqrt(nsq));
      for (int c = 0; c < d; ++c) p[static_cast<std::size_t>(i * d + c)] *= scale;
    }
  }
  return s;
}

// Rejects configurations whose loss sits within a finite-difference step of
// a hinge kink, an arccos/arcsin boundary, or the aperture clamp.
bool config_is_clean(const Setup& s) {
  const int k = s.table.shape().k;
  auto lifted = [&](int e) { return s.table.lift(e, s.scalars); };
  auto clean_pair = [&](const ProductPoint& x, const ProductPoint& y, double eta) {
    for (int i = 0; i < k; ++i) {
      const auto& xf = x.factor(i);
      const auto& yf = y.factor(i);
      double ny = yf.space_norm();
      if (ny < 1e-2) return false;
      double ss = detail::sinh_sq_half_dist(xf, yf);
      if (ss < 1e-5) return false;
      double sa = std::sqrt(xf.alpha());
      double q = 2.0 * s.scalars.cone.K / (sa * ny);
      if (std::abs(q - 1.0) < 5e-3) return false;
      double phi = exterior_angle(xf, yf);
      double omega = half_aperture(yf, s.scalars.cone);
      if (std::abs(phi - eta * omega) < 2e-3) return false;
      double z = 1.0 + 2.0 * ss;
      double cphi = (xf.time() - yf.time() * z) / (2.0 * ny * std::sqrt(ss * (1.0 + ss)));
      if (std::abs(cphi) > 1.0 - 1e-4) return false;
    }
    return true;
  };
  std::vector<ProductPoint> img, txt, ibx, tbx;
  for (const auto& item : s.batch) {
    img.push_back(lifted(item.image));
    txt.push_back(lifted(item.text));
    ibx.push_back(lifted(item.image_box));
    tbx.push_back(lifted(item.text_box));
  }
  for (std::size_t b = 0; b < s.batch.size(); ++b) {
    if (!clean_pair(img[b], txt[b], s.scalars.eta_inter)) return false;
    if (!clean_pair(ibx[b], tbx[b], s.scalars.eta_inter)) return false;
    if (!clean_pair(img[b], ibx[b], s.scalars.eta_intra)) return false;
    if (!clean_pair(txt[b], tbx[b], s.scalars.eta_intra)) return false;
  }
  // Contrastive pairs must stay clear of the coincident-point floor.
  auto min_sep = [&](const std::vector<ProductPoint>& a, const std::vector<ProductPoint>& b) {
    double mn = 1e300;
    for (const auto& pa : a) {
      for (const auto& pb : b) {
        for (int i = 0; i < k; ++i) {
          mn = std::min(mn, detail::sinh_sq_half_dist(pa.factor(i), pb.factor(i)));
        }
      }
    }
    return mn;
  };
  if (min_sep(img, txt) < 1e-6 || min_sep(ibx, tbx) < 1e-6) return false;
  return true;
}

}  // namespace

GradCheckResult run_gradcheck(int n_configs, std::uint64_t seed, const GradCheckOptions& opts) {
  if (n_configs < 1) throw InputError("gradcheck: need at least one configuration");
  Rng rng(seed);
  GradCheckResult result;
  Gradients grads;
  const double h = opts.fd_step;

  for (int cfgi = 0; cfgi < n_configs; ++cfgi) {
    Setup s = make_setup(rng, opts);
    int tries = 0;
    while (!config_is_clean(s)) {
      if (++tries > 500) throw ContractError("gradcheck: could not sample a clean configuration");
      s = make_setup(rng, opts);
    }
    ++result.configs;
    loss_gradient(s.batch, s.table, s.scalars, grads, opts.metric);

    auto forward = [&](Setup& setup) {
      Gradients scratch;
      return loss_gradient(setup.batch, setup.table, setup.scalars, scratch, opts.metric).overall;
    };
    auto check = [&](double analytic, double plus, double minus) {
      double fd = (plus - minus) / (2.0 * h);
      if (std::max(std::abs(analytic), std::abs(fd)) <= opts.grad_floor) return;
      ++result.coords_checked;
      double rel = std::abs(analytic - fd) / std::max(std::abs(analytic), std::abs(fd));
      result.max_rel_err = std::max(result.max_rel_err, rel);
    };

    const int kd = s.table.shape().total_dim();
    for (int e = 0; e < s.table.size(); ++e) {
      auto it = grads.table.find(e);
      for (int c = 0; c < kd; ++c) {
        double save = s.table.params(e)[static_cast<std::size_t>(c)];
        s.table.params(e)[static_cast<std::size_t>(c)] = save + h;
        double lp = forward(s);
        s.table.params(e)[static_cast<std::size_t>(c)] = save - h;
        double lm = forward(s);
        s.table.params(e)[static_cast<std::size_t>(c)] = save;
        double analytic = (it == grads.table.end()) ? 0.0 : it->second[static_cast<std::size_t>(c)];
        check(analytic, lp, lm);
      }
    }
    {
      double save = s.scalars.tau_temp;
      s.scalars.tau_temp = save + h;
      double lp = forward(s);
      s.scalars.tau_temp = save - h;
      double lm = forward(s);
      s.scalars.tau_temp = save;
      check(grads.tau, lp, lm);
    }
    {
      double save = s.scalars.log_c_img;
      s.scalars.log_c_img = save + h;
      double lp = forward(s);
      s.scalars.log_c_img = save - h;
      double lm = forward(s);
      s.scalars.log_c_img = save;
      check(grads.log_c_img, lp, lm);
    }
    {
      double save = s.scalars.log_c_txt;
      s.scalars.log_c_txt = save + h;
      double lp = forward(s);
      s.scalars.log_c_txt = save - h;
      double lm = forward(s);
      s.scalars.log_c_txt = save;
      check(grads.log_c_txt, lp, lm);
    }
    for (int i = 0; i < s.table.shape().k; ++i) {
      double save = s.scalars.alpha[static_cast<std::size_t>(i)];
      s.scalars.alpha[static_cast<std::size_t>(i)] = save + h;
      double lp = forward(s);
      s.scalars.alpha[static_cast<std::size_t>(i)] = save - h;
      double lm = forward(s);
      s.scalars.alpha[static_cast<std::size_t>(i)] = save;
      check(grads.alpha[static_cast<std::size_t>(i)], lp, lm);
    }
  }
  return result;
}

}  // namespace hypf
