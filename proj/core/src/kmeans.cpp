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

#include "oodkit/kmeans.hpp"

#include <limits>
#include <string>

#include "oodkit/error.hpp"
#include "oodkit/random.hpp"

namespace oodkit {
namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

Matrix plus_plus_seeds(const Matrix& points, std::size_t k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Matrix centroids(static_cast<Eigen::Index>(k), points.cols());
  std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  Eigen::Index chosen = static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(n)));
  for (std::size_t c = 0; c < k; ++c) {
    centroids.row(static_cast<Eigen::Index>(c)) = points.row(chosen);
    if (c + 1 == k) break;
    std::vector<double> cumulative(static_cast<std::size_t>(n));
    double running = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& d = nearest[static_cast<std::size_t>(i)];
      d = std::min(d, squared_distance(points, i, centroids, static_cast<Eigen::Index>(c)));
      running += d;
      cumulative[static_cast<std::size_t>(i)] = running;
    }
    if (!(running > 0.0)) {
      throw DataError("k-means: fewer distinct points than K=" + std::to_string(k));
    }
    chosen = static_cast<Eigen::Index>(rng.categorical(cumulative));
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k < 1) throw UsageError("k-means: K must be >= 1");
  const Eigen::Index n = points.rows();
  if (static_cast<std::size_t>(n) < k) {
    throw DataError("k-means: " + std::to_string(n) + " points for K=" + std::to_string(k));
  }
  Rng rng(seed);
  KMeansResult result;
  result.centroids = plus_plus_seeds(points, k, rng);
  result.assignment.assign(static_cast<std::size_t>(n), 0);
  const auto kk = static_cast<Eigen::Index>(k);
  std::vector<double> dist(static_cast<std::size_t>(n), 0.0);

  const auto assign = [&] {
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (Eigen::Index c = 0; c < kk; ++c) {
        const double d = squared_distance(points, i, result.centroids, c);
        if (d < best) {
          best = d;
          arg = static_cast<std::size_t>(c);
        }
      }
      result.assignment[static_cast<std::size_t>(i)] = arg;
      dist[static_cast<std::size_t>(i)] = best;
    }
  };

  for (int iter = 0; iter < options.max_iters; ++iter) {
    assign();
    std::vector<std::size_t> counts(k, 0);
    for (const auto a : result.assignment) ++counts[a];
    // Empty clusters steal the currently worst-fit point.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = dist.size();
      for (std::size_t i = 0; i < dist.size(); ++i) {
        if (counts[result.assignment[i]] < 2) continue;
        if (far == dist.size() || dist[i] > dist[far]) far = i;
      }
      --counts[result.assignment[far]];
      result.assignment[far] = c;
      dist[far] = 0.0;
      ++counts[c];
    }
    Matrix updated = Matrix::Zero(kk, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      updated.row(static_cast<Eigen::Index>(result.assignment[static_cast<std::size_t>(i)])) +=
          points.row(i);
    }
    double shift = 0.0;
    for (Eigen::Index c = 0; c < kk; ++c) {
      updated.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      shift = std::max(shift, (updated.row(c) - result.centroids.row(c)).norm());
    }
    result.centroids = std::move(updated);
    result.iterations = iter + 1;
    if (shift < options.tol) break;
  }
  assign();
  result.inertia = 0.0;
  for (const double d : dist) result.inertia += d;
  return result;
}

}  // namespace oodkit
