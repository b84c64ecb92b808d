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
#include <limits>
#include <numbers>

#include "frozen_values.hpp"
#include "oodkit/error.hpp"
#include "oodkit/gmm.hpp"
#include "oodkit/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace oodkit {
namespace {

using testing::random_matrix;

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

TEST(Gmm, SingleComponentIsSampleMoments) {
  Matrix pts(4, 2);
  pts << 0, 0, 2, 0, 0, 2, 2, 2;
  const GmmModel g = fit_gmm(pts);
  EXPECT_EQ(g.weights(0), 1.0);
  EXPECT_EQ(g.means, Matrix::Ones(1, 2));
  EXPECT_EQ(g.variances, Matrix::Ones(1, 2));
  const Vector x = Vector::Ones(2);
  EXPECT_NEAR(log_density(g, as_span(x)), frozen::kGmmPeak, 1e-12);
}

TEST(Gmm, SingleComponentMatchesMleOnRandomData) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix pts = random_matrix(30 + static_cast<Eigen::Index>(rng.below(50)), 5, rng, 2.0);
    GmmOptions o;
    o.variance_floor = 0.5;
    const GmmModel g = fit_gmm(pts, o);
    const Vector mean = pts.colwise().mean().transpose();
    const Matrix centred = pts.rowwise() - mean.transpose();
    const Vector var = (centred.array().square().colwise().sum() / static_cast<double>(pts.rows()))
                           .matrix().transpose().cwiseMax(0.5);
    EXPECT_LE((g.means.row(0).transpose() - mean).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((g.variances.row(0).transpose() - var).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Gmm, SinglePointGetsFloor) {
  Matrix pt(1, 3);
  pt << 1, 2, 3;
  const GmmModel g = fit_gmm(pt);
  EXPECT_EQ(g.means, pt);
  EXPECT_EQ(g.variances, Matrix::Constant(1, 3, 1e-6));
}

TEST(Gmm, EmLogLikelihoodNeverDecreases) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Matrix pts = random_matrix(120, 3, rng);
    pts.topRows(50).array() += 3.0;
    pts.bottomRows(30).col(1).array() -= 4.0;
    GmmOptions o;
    o.components = 3;
    o.seed = seed;
    o.tol = 0.0;
    o.max_iters = 60;
    const GmmModel g = fit_gmm(pts, o);
    ASSERT_GE(g.fit_log.size(), 2u);
    for (std::size_t i = 1; i < g.fit_log.size(); ++i) {
      EXPECT_GE(g.fit_log[i] - g.fit_log[i - 1], -1e-9) << "seed " << seed << " iter " << i;
    }
    EXPECT_NEAR(g.weights.sum(), 1.0, 1e-12);
    EXPECT_GE(g.variances.minCoeff(), o.variance_floor);
  }
}

TEST(Gmm, RecoversTwoSeparatedBlobs) {
  Rng rng(5);
  Matrix pts = random_matrix(400, 2, rng, 0.1);
  pts.topRows(300).array() += 20.0;
  GmmOptions o;
  o.components = 2;
  o.seed = 5;
  const GmmModel g = fit_gmm(pts, o);
  const Eigen::Index big = g.means(0, 0) > 10.0 ? 0 : 1;
  EXPECT_NEAR(g.weights(big), 0.75, 0.01);
  EXPECT_NEAR(g.means(big, 0), 20.0, 0.05);
  EXPECT_NEAR(g.means(1 - big, 0), 0.0, 0.05);
}

TEST(Gmm, SymmetricMixtureAtMidpoint) {
  GmmModel g;
  g.weights = Vector::Constant(2, 0.5);
  g.means.resize(2, 1);
  g.means << -1, 1;
  g.variances = Matrix::Ones(2, 1);
  const double component = -0.5 * std::log(2 * std::numbers::pi) - 0.5;
  const Vector mid = Vector::Zero(1);
  EXPECT_NEAR(log_density(g, as_span(mid)), component, 1e-14);
}

TEST(Gmm, IdenticalPointsWarn) {
  testing::CapturedLog log;
  GmmOptions o;
  o.components = 2;
  const GmmModel g = fit_gmm(Matrix::Ones(10, 2), o);
  EXPECT_TRUE(log.contains("degenerate"));
  EXPECT_EQ(g.variances, Matrix::Constant(2, 2, o.variance_floor));
}

TEST(Gmm, Errors) {
  GmmOptions o;
  o.components = 3;
  EXPECT_THROW(fit_gmm(Matrix::Ones(2, 2), o), DataError);
  const GmmModel g = fit_gmm(Matrix::Identity(3, 3));
  const Vector wrong = Vector::Zero(2);
  testing::expect_error<DataError>([&] { log_density(g, as_span(wrong)); }, "dimension");
}

TEST(Gmm, BatchMatchesSingle) {
  Rng rng(8);
  const Matrix pts = random_matrix(50, 4, rng);
  GmmOptions o;
  o.components = 2;
  const GmmModel g = fit_gmm(pts, o);
  const Vector batch = log_density(g, pts);
  double total = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const Vector row = pts.row(i).transpose();
    EXPECT_EQ(batch(i), log_density(g, as_span(row)));
    total += batch(i);
  }
  EXPECT_NEAR(total_log_likelihood(g, pts), total, 1e-9);
}

TEST(Decide, StrictThreshold) {
  EXPECT_FALSE(decide_score(2.0, 2.0).is_ood);
  EXPECT_TRUE(decide_score(2.0 + 1e-12, 2.0).is_ood);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(decide_score(1e300, inf).is_ood);
  EXPECT_TRUE(decide_score(-1e300, -inf).is_ood);
  const GmmModel g = fit_gmm(Matrix::Identity(3, 3));
  const Vector x = Vector::Zero(3);
  const Decision d = decide(g, as_span(x), 0.0);
  EXPECT_EQ(d.ood_score, -log_density(g, as_span(x)));
  EXPECT_EQ(d.is_ood, d.ood_score > 0.0);
}

}  // namespace
}  // namespace oodkit
