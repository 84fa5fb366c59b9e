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

#include "hypf/table.hpp"

namespace hypf {

const char* role_name(Role r) {
  switch (r) {
    case Role::image: return "image";
    case Role::text: return "text";
    case Role::image_box: return "image_box";
    case Role::text_box: return "text_box";
  }
  return "?";
}

Role role_from_name(const std::string& name) {
  if (name == "image") return Role::image;
  if (name == "text") return Role::text;
  if (name == "image_box") return Role::image_box;
  if (name == "text_box") return Role::text_box;
  throw InputError("unknown role: " + name);
}

Role role_from_id(const std::string& id) {
  if (id.rfind("img:", 0) == 0) return Role::image;
  if (id.rfind("txt:", 0) == 0) return Role::text;
  if (id.rfind("ibx:", 0) == 0) return Role::image_box;
  if (id.rfind("tbx:", 0) == 0) return Role::text_box;
  throw InputError("entity id carries no role prefix: " + id);
}

TrainScalars TrainScalars::defaults(int k) {
  TrainScalars s;
  s.log_c_img = std::log(1.0 / std::sqrt(512.0));
  s.log_c_txt = s.log_c_img;
  s.alpha.assign(static_cast<std::size_t>(k), 1.0);
  return s;
}

void TrainScalars::clamp() {
  if (tau_temp < 0.01) tau_temp = 0.01;
  for (double& a : alpha) {
    if (a < 0.1) a = 0.1;
    if (a > 10.0) a = 10.0;
  }
}

int EmbeddingTable::add_entity(const std::string& id, Role role) {
  if (index_.count(id)) throw InputError("duplicate entity id: " + id);
  int n = static_cast<int>(ids_.size());
  index_.emplace(id, n);
  ids_.push_back(id);
  roles_.push_back(role);
  params_.resize(params_.size() + static_cast<std::size_t>(shape_.total_dim()), 0.0);
  return n;
}

int EmbeddingTable::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown entity id: " + id);
  return it->second;
}

void EmbeddingTable::randomize(Rng& rng, double stddev) {
  for (double& v : params_) v = rng.normal() * stddev;
}

ProductPoint EmbeddingTable::lift(int entity, const TrainScalars& scalars) const {
  if (static_cast<int>(scalars.alpha.size()) != shape_.k) {
    throw InputError("scalars carry a different factor count than the table");
  }
  return slice_and_lift(params(entity), shape_, scalars.alpha,
                        scalars.c_for(role(entity)));
}

}  // namespace hypf
