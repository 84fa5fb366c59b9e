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

#ifndef HYPF_TABLE_HPP_
#define HYPF_TABLE_HPP_

#include <cmath>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypf/cones.hpp"
#include "hypf/product.hpp"
#include "hypf/rng.hpp"

namespace hypf {

enum class Role { image, text, image_box, text_box };

const char* role_name(Role r);
Role role_from_name(const std::string& name);
// Entity ids carry their role as a prefix ("img:", "txt:", "ibx:", "tbx:").
Role role_from_id(const std::string& id);

// Trainable scalar parameters with their external clamps. c_img/c_txt are
// learned on a log scale and stored as logarithms; tau and the per-factor
// curvatures are learned directly and clamped after every optimizer step.
struct TrainScalars {
  double tau_temp = 0.07;    // temperature, floor 0.01
  double gamma = 0.2;        // entailment weight (fixed)
  double eta_inter = 0.7;    // margin for inter-modality pairs (fixed)
  double eta_intra = 1.2;    // margin for intra-modality pairs (fixed)
  double log_c_img = 0.0;
  double log_c_txt = 0.0;
  std::vector<double> alpha;  // per factor, clamp [0.1, 10.0]
  ConeParams cone{0.1};

  static TrainScalars defaults(int k);

  double c_img() const { return std::exp(log_c_img); }
  double c_txt() const { return std::exp(log_c_txt); }
  double c_for(Role r) const {
    return (r == Role::image || r == Role::image_box) ? c_img() : c_txt();
  }
  double eta_for_inter() const { return eta_inter; }
  void clamp();
};

// Free embedding table standing in for the encoders: one trainable tangent
// parameter vector of dimension k*d per entity, lifted on demand.
class EmbeddingTable {
 public:
  EmbeddingTable(ProductShape shape) : shape_(shape) {}

  int add_entity(const std::string& id, Role role);
  int index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  int size() const { return static_cast<int>(ids_.size()); }
  ProductShape shape() const { return shape_; }

  Role role(int entity) const { return roles_[static_cast<std::size_t>(entity)]; }
  const std::string& id_of(int entity) const { return ids_[static_cast<std::size_t>(entity)]; }

  std::span<double> params(int entity) {
    return {params_.data() + static_cast<std::size_t>(entity) * static_cast<std::size_t>(shape_.total_dim()),
            static_cast<std::size_t>(shape_.total_dim())};
  }
  std::span<const double> params(int entity) const {
    return {params_.data() + static_cast<std::size_t>(entity) * static_cast<std::size_t>(shape_.total_dim()),
            static_cast<std::size_t>(shape_.total_dim())};
  }

  void randomize(Rng& rng, double stddev);

  // Lifts one entity through its role scale: slice_and_lift(c_role * v).
  ProductPoint lift(int entity, const TrainScalars& scalars) const;

 private:
  ProductShape shape_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<Role> roles_;
  std::vector<double> params_;
};

// One aligned batch item: entity indices for the instance's image, text and
// the sampled box pair.
struct BatchItem {
  int image = -1;
  int text = -1;
  int image_box = -1;
  int text_box = -1;
};
using Batch = std::vector<BatchItem>;

}  // namespace hypf

#endif  // HYPF_TABLE_HPP_
