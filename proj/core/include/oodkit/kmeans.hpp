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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oodkit/linalg.hpp"

namespace oodkit {

struct KMeansOptions {
  int max_iters = 300;
  double tol = 1e-8;  // stop once no centroid moves farther than this

  bool operator==(const KMeansOptions&) const = default;
};

struct KMeansResult {
  Matrix centroids;                  // K x d
  std::vector<std::size_t> assignment;
  double inertia = 0.0;              // sum of squared distances to centroids
  int iterations = 0;
};

// Lloyd's algorithm from seeded k-means++ starts. An empty cluster takes the
// point farthest from its current centroid. Throws DataError when there are
// fewer points (or fewer distinct points) than K, UsageError when K < 1.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

}  // namespace oodkit
