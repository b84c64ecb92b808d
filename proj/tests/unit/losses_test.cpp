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


#include <gtest/gtest.h>

#include <cmath>

#include "frozen_values.hpp"
#include "oodkit/error.hpp"
#include "oodkit/losses.hpp"
#include "oodkit/random.hpp"
#include "oracles.hpp"

namespace oodkit {
namespace {

using testing::random_matrix;

Matrix m22(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix random_stochastic(Eigen::Index rows, Eigen::Index k, Rng& rng) {
  Matrix q(rows, k);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) q(i, j) = rng.uniform(0.01, 1.0);
    q.row(i) /= q.row(i).sum();
  }
  return q;
}

TEST(SoftAssign, Examples) {
  Matrix mu(2, 2);
  mu << 0, 0, 2, 0;
  const Matrix q = soft_assign(Matrix::Zero(1, 2), mu, 1.0);
  EXPECT_NEAR(q(0, 0), frozen::kSoftAssign[0], 1e-15);
  EXPECT_NEAR(q(0, 1), frozen::kSoftAssign[1], 1e-15);
  Matrix mid(1, 2);
  mid << 1, 0;
  EXPECT_EQ(soft_assign(mid, mu, 1.0), Matrix::Constant(1, 2, 0.5));
  Rng rng(1);
  EXPECT_EQ(soft_assign(random_matrix(3, 2, rng), mu.topRows(1), 1.0), Matrix::Ones(3, 1));
}

TEST(TargetDistribution, HandValue) {
  const Matrix p = target_distribution(m22(0.9, 0.1, 0.5, 0.5));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(p(i, j), frozen::kTargetP[i][j], 1e-9);
  }
}

TEST(TargetDistribution, SingleRowAndIdenticalRows) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const Matrix q = random_stochastic(1, 2 + static_cast<Eigen::Index>(rng.below(5)), rng);
    EXPECT_EQ(target_distribution(q), q);
    const Matrix rows = q.replicate(4, 1);
    EXPECT_LE((target_distribution(rows) - rows).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ClusterLoss, HandValues) {
  const Matrix q = m22(0.9, 0.1, 0.5, 0.5);
  EXPECT_NEAR(cluster_loss(target_distribution(q), q), frozen::kKlMean, 1e-9);
  Matrix one_hot(1, 2);
  one_hot << 1, 0;
  Matrix q1(1, 2);
  q1 << 0.9, 0.1;
  EXPECT_NEAR(cluster_loss(one_hot, q1), frozen::kKlOneHot, 1e-12);
  EXPECT_EQ(cluster_loss(q, q), 0.0);
}

TEST(ClusterLoss, ClampsZeroQ) {
  Matrix p(1, 2), q(1, 2);
  p << 0.5, 0.5;
  q << 1.0, 0.0;
  bool clamped = false;
  const double v = cluster_loss(p, q, &clamped);
  EXPECT_TRUE(clamped);
  EXPECT_TRUE(std::isfinite(v));
}

TEST(Distributions, Invariants) {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    const auto m = static_cast<Eigen::Index>(1 + rng.below(16));
    const auto k = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto d = static_cast<Eigen::Index>(1 + rng.below(8));
    const double alpha = rng.uniform(0.2, 3.0);
    const Matrix q = soft_assign(random_matrix(m, d, rng, 3.0), random_matrix(k, d, rng, 3.0), alpha);
    const Matrix p = target_distribution(q);
    for (Eigen::Index i = 0; i < m; ++i) {
      EXPECT_NEAR(q.row(i).sum(), 1.0, 1e-12);
      EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
    }
    EXPECT_GE(q.minCoeff(), 0.0);
    EXPECT_LE(q.maxCoeff(), 1.0);
    EXPECT_GE(p.minCoeff(), 0.0);
    EXPECT_LE(p.maxCoeff(), 1.0);
    EXPECT_GE(cluster_loss(p, q), 0.0);
    EXPECT_EQ(cluster_loss(q, q), 0.0);
    if ((p - q).cwiseAbs().maxCoeff() > 1e-6) EXPECT_GT(cluster_loss(p, q), 0.0);
  }
}

TEST(Contrastive, HandValue) {
  Matrix z(4, 2);
  z << 1, 0, 1, 0, 0, 1, 0, 1;
  EXPECT_NEAR(contrastive_loss(z, 0.5), frozen::kNtXentOrthogonal, 1e-9);
  EXPECT_NEAR(contrastive_loss(z, 0.5), std::log(1.0 + 2.0 * std::exp(-2.0)), 1e-12);
}

TEST(Contrastive, SinglePairIsZero) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) EXPECT_NEAR(contrastive_loss(random_matrix(2, 3, rng), 0.5), 0.0, 1e-15);
}

TEST(Contrastive, FlatTemperatureLimit) {
  Matrix z(4, 2);
  z << 1.0, 0.2, 0.3, 1.0, -1.0, 0.5, 0.1, -0.7;
  EXPECT_NEAR(contrastive_loss(z, 1e6), frozen::kNtXentFlatTau, 1e-12);
  EXPECT_NEAR(contrastive_loss(z, 1e6), std::log(3.0), 1e-6);
}

TEST(Contrastive, ScaleAndPermutationInvariance) {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.below(6));
    Matrix z = random_matrix(2 * m, 4, rng);
    const double base = contrastive_loss(z, 0.5);
    Matrix scaled = z;
    scaled.row(static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(2 * m)))) *=
        rng.uniform(0.1, 10.0);
    EXPECT_NEAR(contrastive_loss(scaled, 0.5), base, 1e-12);
    // swap pair 0 with pair m-1, keeping each pair adjacent
    Matrix perm = z;
    perm.row(0).swap(perm.row(2 * m - 2));
    perm.row(1).swap(perm.row(2 * m - 1));
    EXPECT_NEAR(contrastive_loss(perm, 0.5), base, 1e-12);
  }
}

TEST(Contrastive, ZeroRowIsNumericError) {
  Matrix z = Matrix::Ones(4, 2);
  z.row(2).setZero();
  EXPECT_THROW(contrastive_loss(z, 0.5), NumericError);
}

TEST(ClusterLoss, PermutationInvariance) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Matrix e = random_matrix(6, 3, rng);
    const Matrix mu = random_matrix(3, 3, rng);
    const Matrix q = soft_assign(e, mu, 1.0);
    Matrix ep = e;
    ep.row(0).swap(ep.row(5));
    const Matrix qp = soft_assign(ep, mu, 1.0);
    EXPECT_NEAR(cluster_loss(target_distribution(qp), qp), cluster_loss(target_distribution(q), q),
                1e-12);
  }
}

}  // namespace
}  // namespace oodkit
