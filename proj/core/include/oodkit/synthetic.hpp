// Copyright 2026 The oodkit Authors
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

#pragma once

#include <cstdint>

#include "oodkit/dataset.hpp"
#include "oodkit/embeddings.hpp"

namespace oodkit {

// Gaussian benchmark: ID cluster centres form a regular simplex (all pairwise
// distances `center_distance`) inside a random subspace of the base space;
// the OOD centre sits `ood_offset` from the first ID centre, pointing away
// from the ID centroid.
struct SyntheticSpec {
  int dim = 16;
  int n_id_clusters = 4;
  int points_per_cluster = 200;
  double center_distance = 6.0;
  double ood_offset = 3.0;
  double noise_std = 1.0;
  // Per ID cluster: the first n_train points are train, then n_valid valid,
  // the rest test. OOD points are split evenly between valid and test.
  int n_train = 120;
  int n_valid = 40;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Dataset dataset;  // split already applied: is_ood set on valid/test
  EmbeddingSet embeddings;
  Matrix id_centers;
  Vector ood_center;
};

SyntheticData make_synthetic(const SyntheticSpec& spec);

}  // namespace oodkit
