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

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypf/config.hpp"
#include "hypf/distortion.hpp"
#include "hypf/gradcheck.hpp"
#include "hypf/losses.hpp"
#include "hypf/metrics.hpp"
#include "hypf/obstruction.hpp"
#include "hypf/plot.hpp"
#include "hypf/sarkar.hpp"
#include "hypf/synthetic.hpp"
#include "hypf/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hypf;

namespace {

constexpr const char* kVersion = "0.1.0";

// Every command writes one manifest next to its outputs.
struct RunManifest {
  std::string command;
  json config_snapshot = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;
  bool deterministic = true;

  void write(const fs::path& dir) const {
    json j;
    j["command"] = command;
    j["config"] = config_snapshot;
    j["seed"] = seed;
    j["version"] = kVersion;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["wall_time_s"] = wall_time_s;
    j["deterministic"] = deterministic;
    std::ofstream f(dir / "manifest.json");
    f << j.dump(2) << '\n';
  }
};

fs::path make_run_dir(const std::string& out, std::uint64_t seed) {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%S", &tm);
  fs::path dir = fs::path(out) / ("run_" + std::string(stamp) + "_s" + std::to_string(seed));
  // Keep names unique if two runs share a second.
  fs::path candidate = dir;
  for (int i = 1; fs::exists(candidate); ++i) {
    candidate = dir;
    candidate += "_" + std::to_string(i);
  }
  fs::create_directories(candidate);
  return candidate;
}

json config_json(const Config& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.values()) j[k] = v;
  return j;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

Config load_config_opt(const std::string& path) {
  if (path.empty()) return Config{};
  return Config::parse_file(path);
}

int cmd_gen(const std::string& config_path, long long seed_flag, const std::string& out,
            bool deterministic) {
  Timer timer;
  Config cfg = load_config_opt(config_path);
  cfg.require_known({"families", "depth", "branching", "instances", "concepts_per_instance",
                     "generalization", "seed"});
  std::uint64_t seed = (seed_flag >= 0) ? static_cast<std::uint64_t>(seed_flag)
                                        : static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  int families = static_cast<int>(cfg.get_int("families", 4));
  int depth = static_cast<int>(cfg.get_int("depth", 2));
  int branching = static_cast<int>(cfg.get_int("branching", 3));
  int instances = static_cast<int>(cfg.get_int("instances", 2000));
  int cpi = static_cast<int>(cfg.get_int("concepts_per_instance", 2));
  int gen = static_cast<int>(cfg.get_int("generalization", 1));

  Dataset ds = gen_dataset(families, depth, branching, instances, cpi, seed, gen);
  fs::path run = make_run_dir(out, seed);
  save_dataset((run / "dataset").string(), ds);

  RunManifest mf;
  mf.command = "gen";
  mf.config_snapshot = config_json(cfg);
  mf.config_snapshot["resolved_seed"] = seed;
  int nodes_per_family = ds.families.empty() ? 0 : ds.families.front().tree.size();
  mf.config_snapshot["nodes_per_family"] = nodes_per_family;
  mf.seed = seed;
  mf.deterministic = deterministic;
  if (!config_path.empty()) mf.inputs.push_back(config_path);
  mf.outputs.push_back((run / "dataset").string());
  mf.wall_time_s = timer.seconds();
  mf.write(run);
  std::cout << "run_dir: " << run.string() << "\n"
            << "families: " << families << " nodes_per_family: " << nodes_per_family
            << " instances: " << instances << "\n";
  return 0;
}

int cmd_embed_tree(const std::string& tree_path, double epsilon, long long seed_flag,
                   const std::string& out) {
  Timer timer;
  MetricTree tree = MetricTree::load_file(tree_path);
  TreeEmbedding emb = sarkar_embed(tree, epsilon);
  std::uint64_t seed = seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : 0;
  fs::path run = make_run_dir(out, seed);
  {
    std::ofstream f(run / "embedding.dump");
    write_embedding_dump(f, to_dump(emb));
  }
  json rep;
  rep["lambda"] = emb.quality.lambda;
  rep["tau"] = emb.scale.tau;
  rep["worst_pair"] = {emb.quality.worst_pair.first, emb.quality.worst_pair.second};
  rep["precision_bits"] = emb.precision_bits;
  rep["nodes"] = tree.size();
  {
    std::ofstream f(run / "quality.json");
    f << rep.dump(2) << '\n';
  }
  RunManifest mf;
  mf.command = "embed-tree";
  mf.config_snapshot["epsilon"] = epsilon;
  mf.seed = seed;
  mf.inputs.push_back(tree_path);
  mf.outputs.push_back((run / "embedding.dump").string());
  mf.outputs.push_back((run / "quality.json").string());
  mf.wall_time_s = timer.seconds();
  mf.write(run);
  std::cout << "run_dir: " << run.string() << "\n"
            << "lambda: " << emb.quality.lambda << " tau: " << emb.scale.tau << " worst_pair: "
            << emb.quality.worst_pair.first << "," << emb.quality.worst_pair.second << "\n";
  return 0;
}

int cmd_train(const std::string& data_dir, const std::string& config_path, long long seed_flag,
              const std::string& out, bool deterministic) {
  Timer timer;
  Dataset ds = load_dataset(data_dir);
  Config cfg = load_config_opt(config_path);
  if (seed_flag >= 0) cfg.set("seed", std::to_string(seed_flag));
  if (deterministic) cfg.set("deterministic", "true");
  TrainConfig tc = TrainConfig::from_config(cfg);

  TrainResult res = train(ds, tc);
  fs::path run = make_run_dir(out, tc.seed);
  save_checkpoint((run / "checkpoint.txt").string(), res.table, res.scalars);
  {
    std::ofstream f(run / "loss_trace.csv");
    f << "step,overall\n";
    f.precision(17);
    for (std::size_t i = 0; i < res.loss_trace.size(); ++i) {
      f << i << ',' << res.loss_trace[i] << '\n';
    }
  }
  MetricsReport rep = evaluate(ds, res.table, res.scalars, res.layout);
  {
    std::ofstream f(run / "metrics.json");
    f << rep.to_json() << '\n';
  }
  {
    // Histograms as CSV, one file per role.
    for (const auto& [role, s] : rep.norms) {
      std::ofstream f(run / ("norms_" + role + ".csv"));
      f << "bin_lo,bin_hi,count\n";
      for (std::size_t b = 0; b < s.bin_counts.size(); ++b) {
        f << s.bin_edges[b] << ',' << s.bin_edges[b + 1] << ',' << s.bin_counts[b] << '\n';
      }
    }
  }
  RunManifest mf;
  mf.command = "train";
  mf.config_snapshot = config_json(tc.to_config());
  mf.seed = tc.seed;
  mf.deterministic = tc.deterministic;
  mf.inputs.push_back(data_dir);
  if (!config_path.empty()) mf.inputs.push_back(config_path);
  for (const char* f : {"checkpoint.txt", "loss_trace.csv", "metrics.json"}) {
    mf.outputs.push_back((run / f).string());
  }
  mf.wall_time_s = timer.seconds();
  mf.write(run);
  double final_loss = res.loss_trace.empty() ? 0.0 : res.loss_trace.back();
  double r1 = rep.recall_at.count(1) ? rep.recall_at.at(1) : 0.0;
  std::cout << "run_dir: " << run.string() << "\n"
            << "steps: " << res.loss_trace.size() << " final_loss: " << final_loss << "\n"
            << "recall@1: " << r1 << " containment: " << rep.containment_rate
            << " purity: " << rep.activation.specialization_purity << "\n";
  return 0;
}

int cmd_diagnose_obstruction(int starts, long long seed_flag) {
  ObstructionOptions opts;
  opts.starts = starts;
  if (seed_flag >= 0) opts.seed = static_cast<std::uint64_t>(seed_flag);
  auto rep = midpoint_obstruction_witness(opts);
  std::cout << "max_d_bd: " << rep.max_bd << " feasible_starts: " << rep.feasible_starts << "\n";
  if (rep.max_bd > 0.05) {
    std::cerr << "obstruction contract violated: max d(b,d) " << rep.max_bd << " > 0.05\n";
    return 1;
  }
  return 0;
}

int cmd_diagnose_delta_growth(const std::string& sizes_csv) {
  std::vector<int> sizes;
  std::stringstream ss(sizes_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
  if (sizes.empty()) throw InputError("delta-growth: no sizes given");
  double prev = -1.0;
  bool increasing = true;
  for (int m : sizes) {
    auto dm = grid_l1_distance_matrix(m);
    double delta = gromov_delta(dm, m * m);
    std::cout << "m: " << m << " delta: " << delta << "\n";
    if (delta <= prev) increasing = false;
    prev = delta;
  }
  if (!increasing) {
    std::cerr << "delta-growth contract violated: values not strictly increasing\n";
    return 1;
  }
  return 0;
}

int cmd_diagnose_boolean_isometry(int n) {
  if (n < 1 || n > 12) throw InputError("boolean-isometry: n must be in [1, 12]");
  auto elems = enumerate_lattice(n);
  ProductShape shape(n, 2);
  std::vector<ProductPoint> pts;
  pts.reserve(elems.size());
  for (const auto& e : elems) pts.push_back(boolean_to_product(e, shape, 1.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      double dev = std::abs(l1_distance(pts[i], pts[j]) - hamming(elems[i], elems[j]));
      worst = std::max(worst, dev);
    }
  }
  std::cout << "n: " << n << " max_deviation: " << worst << "\n";
  if (worst > 1e-9) {
    std::cerr << "boolean-isometry contract violated: deviation " << worst << " > 1e-9\n";
    return 1;
  }
  return 0;
}

int cmd_diagnose_gradcheck(int configs, long long seed_flag) {
  std::uint64_t seed = seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : 20260810;
  auto res = run_gradcheck(configs, seed);
  std::cout << "configs: " << res.configs << " coords: " << res.coords_checked
            << " max_rel_err: " << res.max_rel_err << "\n";
  if (res.max_rel_err > 1e-4) {
    std::cerr << "gradcheck contract violated: max rel err " << res.max_rel_err << " > 1e-4\n";
    return 1;
  }
  return 0;
}

int cmd_plot(const std::string& checkpoint_path, const std::string& factors_csv,
             long long seed_flag, const std::string& out) {
  Timer timer;
  Checkpoint ck = load_checkpoint(checkpoint_path);
  std::vector<int> factors;
  std::stringstream ss(factors_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) factors.push_back(std::stoi(tok));
  if (factors.empty()) throw InputError("plot: no factor indices given");
  std::uint64_t seed = seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : 0;
  fs::path run = make_run_dir(out, seed);
  RunManifest mf;
  mf.command = "plot";
  mf.seed = seed;
  mf.inputs.push_back(checkpoint_path);
  const ProductShape shape = ck.table.shape();
  for (int fidx : factors) {
    if (fidx < 0 || fidx >= shape.k) throw InputError("plot: factor index out of range");
    std::string svg;
    if (shape.d == 2) {
      std::vector<std::pair<std::string, FactorPoint>> pts;
      for (int e = 0; e < ck.table.size(); ++e) {
        pts.emplace_back(ck.table.id_of(e), ck.table.lift(e, ck.scalars).factor(fidx));
      }
      svg = render_disk_svg(pts, "factor " + std::to_string(fidx));
    } else {
      std::vector<std::pair<std::string, double>> bars;
      for (int e = 0; e < ck.table.size(); ++e) {
        auto p = ck.table.lift(e, ck.scalars).factor(fidx);
        double a = p.alpha();
        bars.emplace_back(ck.table.id_of(e),
                          std::asinh(std::sqrt(a) * p.space_norm()) / std::sqrt(a));
      }
      svg = render_bars_svg(bars, "factor " + std::to_string(fidx) + " norms");
    }
    fs::path file = run / ("factor_" + std::to_string(fidx) + ".svg");
    std::ofstream f(file);
    f << svg;
    mf.outputs.push_back(file.string());
  }
  mf.wall_time_s = timer.seconds();
  mf.write(run);
  std::cout << "run_dir: " << run.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1-product-of-hyperbolic-factors embeddings: datasets, constructive "
               "embeddings, training, evaluation and diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", tree_path, data_dir, checkpoint_path;
  std::string sizes_csv = "4,8,16", factors_csv = "0";
  long long seed = -1;
  bool deterministic = false;
  double epsilon = 0.1;
  int n_bits = 4, gc_configs = 100, ob_starts = 20;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed (overrides config)");
    cmd->add_option("--out", out_dir, "output directory (a run_* dir is created inside)");
    cmd->add_flag("--deterministic", deterministic, "force deterministic execution");
  };

  auto* gen = app.add_subcommand("gen", "generate a synthetic compositional dataset");
  gen->add_option("--config", config_path, "key=value config file");
  add_common(gen);

  auto* embed = app.add_subcommand("embed-tree", "embed a metric tree into the hyperbolic plane");
  embed->add_option("--tree", tree_path, "tree file (#tree header)")->required();
  embed->add_option("--epsilon", epsilon, "distortion target 1+epsilon");
  add_common(embed);

  auto* tr = app.add_subcommand("train", "train embeddings on a generated dataset");
  tr->add_option("--data", data_dir, "dataset directory (from gen)")->required();
  tr->add_option("--config", config_path, "key=value config file");
  add_common(tr);

  auto* diag = app.add_subcommand("diagnose", "run contract diagnostics");
  diag->require_subcommand(1);
  auto* d_ob = diag->add_subcommand("obstruction", "midpoint obstruction witness");
  d_ob->add_option("--starts", ob_starts, "random starts");
  d_ob->add_option("--seed", seed, "random seed");
  auto* d_dg = diag->add_subcommand("delta-growth", "four-point delta on grid products");
  d_dg->add_option("--sizes", sizes_csv, "comma-separated grid sizes");
  auto* d_bi = diag->add_subcommand("boolean-isometry", "exhaustive Hamming-cube isometry check");
  d_bi->add_option("--n", n_bits, "number of atomic concepts");
  auto* d_gc = diag->add_subcommand("gradcheck", "finite-difference gradient sweep");
  d_gc->add_option("--configs", gc_configs, "number of random configurations");
  d_gc->add_option("--seed", seed, "random seed");

  auto* plot = app.add_subcommand("plot", "render factor plots from a checkpoint");
  plot->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  plot->add_option("--factors", factors_csv, "comma-separated factor indices");
  add_common(plot);

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(config_path, seed, out_dir, deterministic);
    if (embed->parsed()) return cmd_embed_tree(tree_path, epsilon, seed, out_dir);
    if (tr->parsed()) return cmd_train(data_dir, config_path, seed, out_dir, deterministic);
    if (diag->parsed()) {
      if (d_ob->parsed()) return cmd_diagnose_obstruction(ob_starts, seed);
      if (d_dg->parsed()) return cmd_diagnose_delta_growth(sizes_csv);
      if (d_bi->parsed()) return cmd_diagnose_boolean_isometry(n_bits);
      if (d_gc->parsed()) return cmd_diagnose_gradcheck(gc_configs, seed);
    }
    if (plot->parsed()) return cmd_plot(checkpoint_path, factors_csv, seed, out_dir);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
