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

#ifndef HYPF_SYNTHETIC_HPP_
#define HYPF_SYNTHETIC_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hypf/combinatorics.hpp"

namespace hypf {

// One concept family: a complete `branching`-ary taxonomy tree of the given
// depth with unit edges.
struct FamilySpec {
  std::string family_id;
  int depth = 1;
  int branching = 2;
  MetricTree tree;
};

// A (family, node) pair; instances are conjunctions of one node from each of
// several families.
struct Concept {
  int family = -1;
  std::string node;
  bool operator==(const Concept&) const = default;
};

struct BoxPair {
  Concept image_concept;  // the instance's leaf for that family
  Concept text_concept;   // its generalized counterpart
};

struct InstanceRecord {
  std::string instance_id;
  std::vector<Concept> concepts;       // image-level: exact leaves
  std::vector<Concept> text_concepts;  // generalized per family
  std::vector<BoxPair> boxes;          // one per concept
};

struct Dataset {
  std::vector<FamilySpec> families;
  std::vector<InstanceRecord> instances;
  int concepts_per_instance = 1;
  int generalization = 1;
  std::uint64_t seed = 0;
};

std::vector<FamilySpec> gen_families(int count, int depth, int branching, std::uint64_t seed);

// Each instance samples a uniform family subset of size concepts_per_instance
// and a uniform leaf per chosen family; text concepts are the ancestors
// `generalization` levels up (clamped at the root).
std::vector<InstanceRecord> gen_instances(const std::vector<FamilySpec>& families,
                                          int n_instances, int concepts_per_instance,
                                          std::uint64_t seed, int generalization = 1);

Dataset gen_dataset(int families, int depth, int branching, int n_instances,
                    int concepts_per_instance, std::uint64_t seed, int generalization = 1);

// Combined taxonomy-and-lattice order: a entails b iff every family
// constraint in b is met by a strictly-or-equally more specific node in a.
bool ground_truth_order(const std::vector<Concept>& a, const std::vector<Concept>& b,
                        const std::vector<FamilySpec>& families);

// Line-delimited JSON serialization of the instance list; families travel as
// tree files alongside.
void write_instances_jsonl(std::ostream& out, const std::vector<InstanceRecord>& instances);
std::vector<InstanceRecord> read_instances_jsonl(std::istream& in);

void save_dataset(const std::string& dir, const Dataset& ds);
Dataset load_dataset(const std::string& dir);

}  // namespace hypf

#endif  // HYPF_SYNTHETIC_HPP_
