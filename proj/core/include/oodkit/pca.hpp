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

#include <string>
#include <vector>

#include "oodkit/linalg.hpp"

namespace oodkit {

struct PcaResult {
  Matrix coords;              // n x 2
  Matrix components;          // 2 x d, unit rows
  Eigen::Vector2d explained;  // variance along each component, nonincreasing
};

// Mean-centred projection onto the top two principal directions. Each
// component's first loading with |value| > 1e-12 is made positive. Throws
// DataError with fewer than 3 points or d < 2.
PcaResult pca2d_project(const Matrix& points);

// "id,pc1,pc2,is_ood" rows.
std::string pca_csv(const std::vector<std::string>& ids, const Matrix& coords,
                    const std::vector<int>& is_ood);

}  // namespace oodkit
