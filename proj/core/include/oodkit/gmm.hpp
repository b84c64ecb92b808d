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
#include <span>
#include <vector>

#include "oodkit/linalg.hpp"

namespace oodkit {

struct GmmOptions {
  std::size_t components = 1;
  std::uint64_t seed = 0;
  int max_iters = 200;
  double tol = 1e-6;           // per-point log-likelihood improvement
  double variance_floor = 1e-6;
};

// Diagonal-covariance Gaussian mixture.
struct GmmModel {
  Vector weights;      // C, on the simplex
  Matrix means;        // C x d
  Matrix variances;    // C x d, each >= variance_floor
  double variance_floor = 1e-6;
  // Total data log-likelihood after each EM iteration (first entry is the
  // initialisation).
  std::vector<double> fit_log;

  std::size_t components() const { return static_cast<std::size_t>(weights.size()); }
  std::size_t dim() const { return static_cast<std::size_t>(means.cols()); }

  bool operator==(const GmmModel& o) const {
    return same_values(weights, o.weights) && same_values(means, o.means) &&
           same_values(variances, o.variances) &&
           variance_floor == o.variance_floor && fit_log == o.fit_log;
  }
};

// EM from k-means-initialised means, cluster-proportion weights and
// per-cluster floored variances. Throws DataError when there are fewer
// points than components; identical points with C > 1 log a degenerate-fit
// warning and leave every variance at the floor.
GmmModel fit_gmm(const Matrix& points, const GmmOptions& options = {});

// ln sum_c w_c N(x; mean_c, diag var_c), via log-sum-exp. Throws DataError
// on a dimension mismatch.
double log_density(const GmmModel& model, std::span<const double> x);
Vector log_density(const GmmModel& model, const Matrix& points);

// Total log-likelihood of a point set under the model.
double total_log_likelihood(const GmmModel& model, const Matrix& points);

struct Decision {
  bool is_ood = false;
  double ood_score = 0.0;  // -log_density
};

// OOD iff -log_density(x) > threshold (strict).
Decision decide(const GmmModel& model, std::span<const double> x, double threshold);
Decision decide_score(double ood_score, double threshold);

}  // namespace oodkit
