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

#include "hypf/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hypf/rng.hpp"

namespace hypf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Complete branching^depth taxonomy; node ids are root-relative paths like
// "fam2:r.0.1".
MetricTree family_tree(const std::string& family_id, int depth, int branching) {
  std::vector<MetricTree::Edge> edges;
  std::vector<std::string> frontier{family_id + ":r"};
  for (int level = 0; level < depth; ++level) {
    std::vector<std::string> next;
    for (const auto& parent : frontier) {
      for (int b = 0; b < branching; ++b) {
        std::string child = parent + "." + std::to_string(b);
        edges.push_back({parent, child, 1.0});
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  return MetricTree::from_edges(edges);
}

std::vector<int> leaves_of(const MetricTree& t) {
  std::vector<int> out;
  for (int v = 0; v < t.size(); ++v) {
    if (t.children(v).empty()) out.push_back(v);
  }
  return out;
}

int ancestor_at(const MetricTree& t, int node, int levels_up) {
  int v = node;
  for (int i = 0; i < levels_up && t.parent(v) != -1; ++i) v = t.parent(v);
  return v;
}

}  // namespace

std::vector<FamilySpec> gen_families(int count, int depth, int branching, std::uint64_t seed) {
  if (count < 1 || depth < 1 || branching < 2) {
    throw InputError("gen_families: need count >= 1, depth >= 1, branching >= 2");
  }
  // The taxonomy shape is fully determined by (depth, branching); the seed
  // only namespaces ids for reproducibility bookkeeping.
  (void)seed;
  std::vector<FamilySpec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int f = 0; f < count; ++f) {
    FamilySpec spec{"fam" + std::to_string(f), depth, branching,
                    family_tree("fam" + std::to_string(f), depth, branching)};
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<InstanceRecord> gen_instances(const std::vector<FamilySpec>& families,
                                          int n_instances, int concepts_per_instance,
                                          std::uint64_t seed, int generalization) {
  const int nf = static_cast<int>(families.size());
  if (concepts_per_instance < 1 || concepts_per_instance > nf) {
    throw InputError("gen_instances: concepts_per_instance must be in [1, #families]");
  }
  if (generalization < 0) throw InputError("gen_instances: generalization must be >= 0");
  Rng rng(seed);
  std::vector<std::vector<int>> leaves;
  leaves.reserve(families.size());
  for (const auto& f : families) leaves.push_back(leaves_of(f.tree));

  std::vector<InstanceRecord> out;
  out.reserve(static_cast<std::size_t>(n_instances));
  for (int i = 0; i < n_instances; ++i) {
    InstanceRecord rec;
    rec.instance_id = "inst" + std::to_string(i);
    auto fams = rng.sample_without_replacement(nf, concepts_per_instance);
    std::sort(fams.begin(), fams.end());
    for (int f : fams) {
      const auto& tree = families[static_cast<std::size_t>(f)].tree;
      const auto& fl = leaves[static_cast<std::size_t>(f)];
      int leaf = fl[static_cast<std::size_t>(rng.uniform_index(fl.size()))];
      int text_node = ancestor_at(tree, leaf, generalization);
      Concept img{f, tree.id_of(leaf)};
      Concept txt{f, tree.id_of(text_node)};
      rec.concepts.push_back(img);
      rec.text_concepts.push_back(txt);
      rec.boxes.push_back({img, txt});
    }
    out.push_back(std::move(rec));
  }
  return out;
}

Dataset gen_dataset(int families, int depth, int branching, int n_instances,
                    int concepts_per_instance, std::uint64_t seed, int generalization) {
  Dataset ds;
  ds.families = gen_families(families, depth, branching, seed);
  ds.instances = gen_instances(ds.families, n_instances, concepts_per_instance,
                               seed + 1, generalization);
  ds.concepts_per_instance = concepts_per_instance;
  ds.generalization = generalization;
  ds.seed = seed;
  return ds;
}

bool ground_truth_order(const std::vector<Concept>& a, const std::vector<Concept>& b,
                        const std::vector<FamilySpec>& families) {
  for (const auto& cb : b) {
    bool met = false;
    for (const auto& ca : a) {
      if (ca.family != cb.family) continue;
      const auto& tree = families[static_cast<std::size_t>(cb.family)].tree;
      int na = tree.index_of(ca.node);
      int nb = tree.index_of(cb.node);
      // descendant-or-equal test via the ancestor chain
      for (int v = na; v != -1; v = tree.parent(v)) {
        if (v == nb) {
          met = true;
          break;
        }
      }
      if (met) break;
    }
    if (!met) return false;
  }
  return true;
}

namespace {
json concept_to_json(const Concept& c) { return json::array({c.family, c.node}); }
Concept concept_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("dataset: malformed concept");
  return Concept{j[0].get<int>(), j[1].get<std::string>()};
}
}  // namespace

void write_instances_jsonl(std::ostream& out, const std::vector<InstanceRecord>& instances) {
  for (const auto& rec : instances) {
    json j;
    j["instance_id"] = rec.instance_id;
    j["concepts"] = json::array();
    for (const auto& c : rec.concepts) j["concepts"].push_back(concept_to_json(c));
    j["text_concepts"] = json::array();
    for (const auto& c : rec.text_concepts) j["text_concepts"].push_back(concept_to_json(c));
    j["boxes"] = json::array();
    for (const auto& b : rec.boxes) {
      j["boxes"].push_back(json{{"image", concept_to_json(b.image_concept)},
                                {"text", concept_to_json(b.text_concept)}});
    }
    out << j.dump() << '\n';
  }
}

std::vector<InstanceRecord> read_instances_jsonl(std::istream& in) {
  std::vector<InstanceRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError("dataset parse error at line " + std::to_string(lineno) + ": " + e.what());
    }
    InstanceRecord rec;
    rec.instance_id = j.at("instance_id").get<std::string>();
    for (const auto& c : j.at("concepts")) rec.concepts.push_back(concept_from_json(c));
    for (const auto& c : j.at("text_concepts")) rec.text_concepts.push_back(concept_from_json(c));
    for (const auto& b : j.at("boxes")) {
      rec.boxes.push_back({concept_from_json(b.at("image")), concept_from_json(b.at("text"))});
    }
    if (rec.concepts.size() != rec.text_concepts.size() ||
        rec.concepts.size() != rec.boxes.size() || rec.concepts.empty()) {
      throw InputError("dataset: inconsistent record at line " + std::to_string(lineno));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void save_dataset(const std::string& dir, const Dataset& ds) {
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / "instances.jsonl");
    if (!f) throw InputError("cannot write dataset to " + dir);
    write_instances_jsonl(f, ds.instances);
  }
  for (const auto& fam : ds.families) {
    std::ofstream f(fs::path(dir) / (fam.family_id + ".tree"));
    fam.tree.serialize(f);
  }
  json meta;
  meta["families"] = json::array();
  for (const auto& fam : ds.families) {
    meta["families"].push_back(json{{"family_id", fam.family_id},
                                    {"depth", fam.depth},
                                    {"branching", fam.branching}});
  }
  meta["concepts_per_instance"] = ds.concepts_per_instance;
  meta["generalization"] = ds.generalization;
  meta["seed"] = ds.seed;
  std::ofstream f(fs::path(dir) / "dataset.json");
  f << meta.dump(2) << '\n';
}

Dataset load_dataset(const std::string& dir) {
  std::ifstream meta_f(fs::path(dir) / "dataset.json");
  if (!meta_f) throw InputError("no dataset.json under " + dir);
  json meta = json::parse(meta_f);
  Dataset ds;
  for (const auto& fam : meta.at("families")) {
    FamilySpec spec;
    spec.family_id = fam.at("family_id").get<std::string>();
    spec.depth = fam.at("depth").get<int>();
    spec.branching = fam.at("branching").get<int>();
    spec.tree = MetricTree::load_file((fs::path(dir) / (spec.family_id + ".tree")).string());
    ds.families.push_back(std::move(spec));
  }
  ds.concepts_per_instance = meta.at("concepts_per_instance").get<int>();
  ds.generalization = meta.at("generalization").get<int>();
  ds.seed = meta.at("seed").get<std::uint64_t>();
  std::ifstream inst_f(fs::path(dir) / "instances.jsonl");
  if (!inst_f) throw InputError("no instances.jsonl under " + dir);
  ds.instances = read_instances_jsonl(inst_f);
  return ds;
}

}  // namespace hypf
