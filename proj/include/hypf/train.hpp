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

#ifndef HYPF_TRAIN_HPP_
#define HYPF_TRAIN_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "hypf/config.hpp"
#include "hypf/losses.hpp"
#include "hypf/synthetic.hpp"

namespace hypf {

struct TrainConfig {
  int k = 4;
  int d = 4;
  double lr = 0.3;
  double scalar_lr = 1e-3;  // temperature, log-scales and curvatures
  int steps = 1000;
  int warmup_steps = 100;
  int batch_size = 64;
  std::uint64_t seed = 1;
  double gamma = 0.2;
  double eta_inter = 0.7;
  double eta_intra = 1.2;
  double weight_decay = 1e-4;
  bool deterministic = true;
  ProductMetric metric = ProductMetric::l1;
  double init_scale = 1.0;

  static TrainConfig from_config(const Config& cfg);
  Config to_config() const;
};

// Entity registry derived from a dataset: one row per image, text and box
// entity, with the instance structure needed to assemble batches.
struct EntityLayout {
  std::vector<int> image;                      // per instance
  std::vector<int> text;                       // per instance
  std::vector<std::vector<int>> image_boxes;   // per instance, per concept
  std::vector<std::vector<int>> text_boxes;
};

EntityLayout build_entities(const Dataset& ds, EmbeddingTable& table);

struct TrainResult {
  EmbeddingTable table;
  TrainScalars scalars;
  EntityLayout layout;
  std::vector<double> loss_trace;
};

// Mini-batch gradient descent with decoupled weight decay on the table only,
// linear warm-up into a cosine learning-rate decay, clamps applied after
// every step. Deterministic under a fixed seed.
TrainResult train(const Dataset& ds, const TrainConfig& cfg);

// ----- checkpoint io: embedding dump plus a scalars block -----

void write_checkpoint(std::ostream& out, const EmbeddingTable& table,
                      const TrainScalars& scalars);
void save_checkpoint(const std::string& path, const EmbeddingTable& table,
                     const TrainScalars& scalars);

struct Checkpoint {
  EmbeddingTable table;
  TrainScalars scalars;
};
Checkpoint read_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hypf

#endif  // HYPF_TRAIN_HPP_
