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

#include "oodkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oodkit/error.hpp"

namespace oodkit {
namespace {

constexpr double kProbFloor = 1e-12;

Matrix squared_distances(const Matrix& e, const Matrix& mu) {
  if (e.cols() != mu.cols()) {
    throw DataError("embedding dimension " + std::to_string(e.cols()) +
                    " does not match centroid dimension " + std::to_string(mu.cols()));
  }
  Matrix d(e.rows(), mu.rows());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index k = 0; k < mu.rows(); ++k) d(i, k) = (e.row(i) - mu.row(k)).squaredNorm();
  }
  return d;
}

}  // namespace

Matrix soft_assign(const Matrix& embeddings, const Matrix& centroids, double alpha) {
  if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
  const Matrix dist = squared_distances(embeddings, centroids);
  const double exponent = -(alpha + 1.0) / 2.0;
  Matrix q(dist.rows(), dist.cols());
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    // Work in logs relative to the nearest centroid so far-away points do
    // not underflow to an all-zero row.
    const double nearest = dist.row(i).minCoeff();
    double total = 0.0;
    for (Eigen::Index k = 0; k < dist.cols(); ++k) {
      const double log_ratio = std::log1p(dist(i, k) / alpha) - std::log1p(nearest / alpha);
      q(i, k) = std::exp(exponent * log_ratio);
      total += q(i, k);
    }
    q.row(i) /= total;
  }
  return q;
}

Matrix target_distribution(const Matrix& q) {
  // q^2 / q = q; returned as is so the identity holds bit for bit.
  if (q.rows() == 1) return q;
  RowVector freq = q.colwise().sum();
  for (Eigen::Index k = 0; k < freq.size(); ++k) freq(k) = std::max(freq(k), kProbFloor);
  Matrix p(q.rows(), q.cols());
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index k = 0; k < q.cols(); ++k) p(i, k) = q(i, k) * q(i, k) / freq(k);
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

double cluster_loss(const Matrix& p, const Matrix& q, bool* clamped) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) throw DataError("cluster_loss: P and Q differ in shape");
  if (p.rows() == 0) throw DataError("cluster_loss: empty batch");
  bool any_clamped = false;
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      const double pk = p(i, k);
      if (pk <= 0.0) continue;
      double qk = q(i, k);
      if (qk < kProbFloor) {
        qk = kProbFloor;
        any_clamped = true;
      }
      row += pk * (std::log(pk) - std::log(qk));
    }
    total += row;
  }
  if (clamped != nullptr) *clamped = any_clamped;
  // KL is nonnegative; rounding can leave a -1e-17 residue when P == Q.
  return std::max(0.0, total / static_cast<double>(p.rows()));
}

ClusterLossGrad cluster_loss_with_grad(const Matrix& embeddings, const Matrix& centroids,
                                       const Matrix& p, double alpha) {
  ClusterLossGrad out;
  out.q = soft_assign(embeddings, centroids, alpha);
  out.value = cluster_loss(p, out.q, &out.clamped);
  const Matrix dist = squared_distances(embeddings, centroids);
  const auto m = static_cast<double>(embeddings.rows());
  out.d_embeddings = Matrix::Zero(embeddings.rows(), embeddings.cols());
  out.d_centroids = Matrix::Zero(centroids.rows(), centroids.cols());
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    const double p_row_sum = p.row(i).sum();
    for (Eigen::Index k = 0; k < centroids.rows(); ++k) {
      // dL/dlog w_ik = (q_ik * sum_k' p_ik' - p_ik) / M, and
      // dlog w / d(dist) = -(alpha + 1) / (2 (alpha + dist)).
      const double d_logw = (out.q(i, k) * p_row_sum - p(i, k)) / m;
      const double d_dist = d_logw * (-(alpha + 1.0) / (2.0 * (alpha + dist(i, k))));
      const RowVector diff = embeddings.row(i) - centroids.row(k);
      out.d_embeddings.row(i) += 2.0 * d_dist * diff;
      out.d_centroids.row(k) -= 2.0 * d_dist * diff;
    }
  }
  return out;
}

ContrastiveLossGrad contrastive_loss_with_grad(const Matrix& z, double tau) {
  if (!(tau > 0.0)) throw UsageError("tau must be positive");
  const Eigen::Index n = z.rows();
  if (n < 2 || n % 2 != 0) {
    throw DataError("contrastive loss needs an even number (>= 2) of rows, got " +
                    std::to_string(n));
  }
  Vector norms(n);
  Matrix u(n, z.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    norms(i) = z.row(i).norm();
    if (!(norms(i) > 0.0)) throw NumericError("contrastive loss: zero-norm row " + std::to_string(i));
    u.row(i) = z.row(i) / norms(i);
  }
  const Matrix sim = (u * u.transpose()) / tau;

  ContrastiveLossGrad out;
  // g(i, j) = dL/dsim(i, j) in units of 1/tau-scaled similarity.
  Matrix g = Matrix::Zero(n, n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index positive = i ^ 1;
    double max_s = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) max_s = std::max(max_s, sim(i, j));
    }
    double denom = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) denom += std::exp(sim(i, j) - max_s);
    }
    const double log_denom = max_s + std::log(denom);
    total += log_denom - sim(i, positive);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      g(i, j) = std::exp(sim(i, j) - log_denom);
    }
    g(i, positive) -= 1.0;
  }
  const double scale = 1.0 / static_cast<double>(n);
  out.value = total * scale;
  g *= scale / tau;
  // sim is symmetric in (i, j), so both orientations feed du.
  const Matrix du = (g + g.transpose()) * u;
  out.d_z.resize(n, z.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const RowVector ui = u.row(i);
    out.d_z.row(i) = (du.row(i) - du.row(i).dot(ui) * ui) / norms(i);
  }
  return out;
}

double contrastive_loss(const Matrix& z, double tau) { return contrastive_loss_with_grad(z, tau).value; }

}  // namespace oodkit
