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

#include "hypf/train.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hypf/sarkar.hpp"

namespace hypf {

TrainConfig TrainConfig::from_config(const Config& cfg) {
  cfg.require_known({"k", "d", "lr", "scalar_lr", "steps", "warmup_steps", "batch_size", "seed",
                     "gamma", "eta_inter", "eta_intra", "weight_decay", "deterministic",
                     "metric", "init_scale"});
  TrainConfig t;
  t.k = static_cast<int>(cfg.get_int("k", t.k));
  t.d = static_cast<int>(cfg.get_int("d", t.d));
  t.lr = cfg.get_double("lr", t.lr);
  t.scalar_lr = cfg.get_double("scalar_lr", t.scalar_lr);
  t.steps = static_cast<int>(cfg.get_int("steps", t.steps));
  t.warmup_steps = static_cast<int>(cfg.get_int("warmup_steps", t.warmup_steps));
  t.batch_size = static_cast<int>(cfg.get_int("batch_size", t.batch_size));
  t.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(t.seed)));
  t.gamma = cfg.get_double("gamma", t.gamma);
  t.eta_inter = cfg.get_double("eta_inter", t.eta_inter);
  t.eta_intra = cfg.get_double("eta_intra", t.eta_intra);
  t.weight_decay = cfg.get_double("weight_decay", t.weight_decay);
  t.deterministic = cfg.get_bool("deterministic", t.deterministic);
  t.metric = metric_from_name(cfg.get_str("metric", metric_name(t.metric)));
  t.init_scale = cfg.get_double("init_scale", t.init_scale);
  if (t.k < 1 || t.d < 1) throw InputError("train config: k and d must be positive");
  if (t.steps < 0 || t.batch_size < 1) throw InputError("train config: bad steps/batch_size");
  if (!(t.lr >= 0.0)) throw InputError("train config: lr must be >= 0");
  return t;
}

Config TrainConfig::to_config() const {
  Config c;
  c.set("k", std::to_string(k));
  c.set("d", std::to_string(d));
  c.set("lr", std::to_string(lr));
  c.set("scalar_lr", std::to_string(scalar_lr));
  c.set("steps", std::to_string(steps));
  c.set("warmup_steps", std::to_string(warmup_steps));
  c.set("batch_size", std::to_string(batch_size));
  c.set("seed", std::to_string(seed));
  c.set("gamma", std::to_string(gamma));
  c.set("eta_inter", std::to_string(eta_inter));
  c.set("eta_intra", std::to_string(eta_intra));
  c.set("weight_decay", std::to_string(weight_decay));
  c.set("deterministic", deterministic ? "true" : "false");
  c.set("metric", metric_name(metric));
  c.set("init_scale", std::to_string(init_scale));
  return c;
}

EntityLayout build_entities(const Dataset& ds, EmbeddingTable& table) {
  EntityLayout layout;
  const int n = static_cast<int>(ds.instances.size());
  layout.image.resize(static_cast<std::size_t>(n));
  layout.text.resize(static_cast<std::size_t>(n));
  layout.image_boxes.resize(static_cast<std::size_t>(n));
  layout.text_boxes.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& rec = ds.instances[static_cast<std::size_t>(i)];
    layout.image[static_cast<std::size_t>(i)] = table.add_entity("img:" + rec.instance_id, Role::image);
    layout.text[static_cast<std::size_t>(i)] = table.add_entity("txt:" + rec.instance_id, Role::text);
    for (std::size_t j = 0; j < rec.boxes.size(); ++j) {
      // One row per crop and per phrase occurrence. Sharing rows between
      // instances that mention the same concept looks tempting (identical
      // phrases encode identically at scale) but floods the in-batch
      // contrastive denominators with duplicate candidates, which a free
      // table can only fight by blowing up norms.
      layout.image_boxes[static_cast<std::size_t>(i)].push_back(
          table.add_entity("ibx:" + rec.instance_id + ":" + std::to_string(j), Role::image_box));
      layout.text_boxes[static_cast<std::size_t>(i)].push_back(
          table.add_entity("tbx:" + rec.instance_id + ":" + std::to_string(j), Role::text_box));
    }
  }
  return layout;
}

TrainResult train(const Dataset& ds, const TrainConfig& cfg) {
  if (ds.instances.empty()) throw InputError("train: empty dataset");
  // Execution is sequential with a fixed reduction order, and the SIMD
  // kernel variants are bit-identical to the scalar reference, so traces
  // reproduce under a fixed seed whether or not `deterministic` is set; the
  // flag is accepted for config compatibility and recorded in manifests.
  ProductShape shape(cfg.k, cfg.d);
  TrainResult res{EmbeddingTable(shape), TrainScalars::defaults(cfg.k), {}, {}};
  res.layout = build_entities(ds, res.table);
  res.scalars.gamma = cfg.gamma;
  res.scalars.eta_inter = cfg.eta_inter;
  res.scalars.eta_intra = cfg.eta_intra;

  Rng rng(cfg.seed);
  res.table.randomize(rng, cfg.init_scale);

  const int n = static_cast<int>(ds.instances.size());
  const int bs = std::min(cfg.batch_size, n);
  res.loss_trace.reserve(static_cast<std::size_t>(cfg.steps));
  Gradients grads;

  for (int step = 0; step < cfg.steps; ++step) {
    // Learning rate: linear warm-up, then cosine decay to zero.
    double lr_t;
    if (step < cfg.warmup_steps) {
      lr_t = cfg.lr * (step + 1) / cfg.warmup_steps;
    } else if (cfg.steps > cfg.warmup_steps) {
      double prog = static_cast<double>(step - cfg.warmup_steps) /
                    static_cast<double>(cfg.steps - cfg.warmup_steps);
      lr_t = cfg.lr * 0.5 * (1.0 + std::cos(3.14159265358979323846 * prog));
    } else {
      lr_t = cfg.lr;
    }

    // Batch: distinct instances, one box pair sampled per instance.
    auto picks = rng.sample_without_replacement(n, bs);
    Batch batch;
    batch.reserve(static_cast<std::size_t>(bs));
    for (int inst : picks) {
      const auto& iboxes = res.layout.image_boxes[static_cast<std::size_t>(inst)];
      std::size_t j = static_cast<std::size_t>(rng.uniform_index(iboxes.size()));
      batch.push_back({res.layout.image[static_cast<std::size_t>(inst)],
                       res.layout.text[static_cast<std::size_t>(inst)],
                       iboxes[j],
                       res.layout.text_boxes[static_cast<std::size_t>(inst)][j]});
    }

    LossValue v = loss_gradient(batch, res.table, res.scalars, grads, cfg.metric);
    if (!std::isfinite(v.overall)) {
      throw ContractError("train: loss diverged (non-finite) at step " + std::to_string(step) +
                          " after " + std::to_string(res.loss_trace.size()) + " recorded steps");
    }
    res.loss_trace.push_back(v.overall);

    // Decoupled weight decay on table rows only.
    const double decay = 1.0 - lr_t * cfg.weight_decay;
    for (const auto& [entity, g] : grads.table) {
      auto p = res.table.params(entity);
      for (std::size_t c = 0; c < p.size(); ++c) {
        p[c] = decay * p[c] - lr_t * g[c];
      }
    }
    // Scalars share one (much smaller) rate: their gradients are batch
    // sums, so the table learning rate would move them far too fast. The
    // warm-up/cosine shape carries over; lr = 0 freezes scalars too.
    const double slr = (cfg.lr > 0.0) ? cfg.scalar_lr * (lr_t / cfg.lr) : 0.0;
    res.scalars.tau_temp -= slr * grads.tau;
    res.scalars.log_c_img -= slr * grads.log_c_img;
    res.scalars.log_c_txt -= slr * grads.log_c_txt;
    for (int i = 0; i < cfg.k; ++i) {
      res.scalars.alpha[static_cast<std::size_t>(i)] -= slr * grads.alpha[static_cast<std::size_t>(i)];
    }
    res.scalars.clamp();
  }
  return res;
}

// ----- checkpoint io -----

void write_checkpoint(std::ostream& out, const EmbeddingTable& table,
                      const TrainScalars& scalars) {
  const ProductShape shape = table.shape();
  EmbeddingDump dump;
  dump.shape = shape;
  dump.alphas = scalars.alpha;
  dump.taus.assign(static_cast<std::size_t>(shape.k), 1.0);
  for (int e = 0; e < table.size(); ++e) {
    dump.ids.push_back(table.id_of(e));
    ProductPoint p = table.lift(e, scalars);
    for (int f = 0; f < shape.k; ++f) dump.coords.push_back(p.factor(f).space());
  }
  write_embedding_dump(out, dump);
  out.precision(17);
  out << "#scalar tau_temp=" << scalars.tau_temp << '\n'
      << "#scalar gamma=" << scalars.gamma << '\n'
      << "#scalar eta_inter=" << scalars.eta_inter << '\n'
      << "#scalar eta_intra=" << scalars.eta_intra << '\n'
      << "#scalar log_c_img=" << scalars.log_c_img << '\n'
      << "#scalar log_c_txt=" << scalars.log_c_txt << '\n'
      << "#scalar K=" << scalars.cone.K << '\n';
}

void save_checkpoint(const std::string& path, const EmbeddingTable& table,
                     const TrainScalars& scalars) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write checkpoint: " + path);
  write_checkpoint(f, table, scalars);
}

Checkpoint read_checkpoint(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  std::istringstream dump_in(text);
  EmbeddingDump dump = read_embedding_dump(dump_in);

  TrainScalars scalars = TrainScalars::defaults(dump.shape.k);
  scalars.alpha = dump.alphas;
  std::istringstream scan(text);
  std::string line;
  while (std::getline(scan, line)) {
    if (line.rfind("#scalar ", 0) != 0) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("checkpoint: malformed scalar line");
    std::string key = line.substr(8, eq - 8);
    double value = std::stod(line.substr(eq + 1));
    if (key == "tau_temp") scalars.tau_temp = value;
    else if (key == "gamma") scalars.gamma = value;
    else if (key == "eta_inter") scalars.eta_inter = value;
    else if (key == "eta_intra") scalars.eta_intra = value;
    else if (key == "log_c_img") scalars.log_c_img = value;
    else if (key == "log_c_txt") scalars.log_c_txt = value;
    else if (key == "K") scalars.cone.K = value;
    else throw InputError("checkpoint: unknown scalar " + key);
  }

  // Rebuild tangent parameters: v = log0(x) / c_role.
  Checkpoint ck{EmbeddingTable(dump.shape), scalars};
  for (std::size_t e = 0; e < dump.ids.size(); ++e) {
    Role role = role_from_id(dump.ids[e]);
    int row = ck.table.add_entity(dump.ids[e], role);
    auto params = ck.table.params(row);
    double c = scalars.c_for(role);
    ProductPoint p = dump.point(static_cast<int>(e));
    for (int f = 0; f < dump.shape.k; ++f) {
      TangentVector u = log0(p.factor(f));
      for (int x = 0; x < dump.shape.d; ++x) {
        params[static_cast<std::size_t>(f * dump.shape.d + x)] = u[static_cast<std::size_t>(x)] / c;
      }
    }
  }
  return ck;
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open checkpoint: " + path);
  return read_checkpoint(f);
}

}  // namespace hypf
