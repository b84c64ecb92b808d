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

#include "grad_instances.hpp"

#include <gtest/gtest.h>

namespace oodkit {
namespace {

using testing::check_gradient;
using testing::GradInstance;
using testing::random_grad_instance;

TEST(GradientTest, ClusterLossMatchesFiniteDifferences) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    GradInstance inst = random_grad_instance(100 + s, true, false, 0.0);
    const auto r = testing::check_instance(inst);
    EXPECT_LE(r.max_rel_error, 1e-5) << "seed " << s;
  }
}

TEST(GradientTest, ContrastiveLossMatchesFiniteDifferences) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    GradInstance inst = random_grad_instance(200 + s, false, true, 1.0);
    EXPECT_LE(testing::check_instance(inst).max_rel_error, 1e-5) << "seed " << s;
  }
}

TEST(GradientTest, JointLossMatchesFiniteDifferences) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    GradInstance inst = random_grad_instance(300 + s, true, true, 0.7);
    EXPECT_LE(testing::check_instance(inst).max_rel_error, 1e-5) << "seed " << s;
  }
}

// Central differences carry O(h^2) truncation error, so the per-coordinate
// discrepancy must shrink ~100x when h drops 10x. A wrong analytic gradient
// would leave an h-independent floor.
TEST(GradientTest, DiscrepancyShrinksQuadraticallyInStep) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    GradInstance inst = random_grad_instance(400 + s, true, true, 1.0, Activation::tanh);
    const double coarse = testing::check_instance(inst, 1e-3).max_elementwise_rel_error;
    const double fine = testing::check_instance(inst, 1e-4).max_elementwise_rel_error;
    EXPECT_LT(fine, coarse / 30.0) << "seed " << s << " coarse " << coarse << " fine " << fine;
  }
}

TEST(GradientTest, CentroidsOnlyReceiveClusterGradient) {
  GradInstance inst = random_grad_instance(7, false, true, 1.0);
  const JointLoss loss = joint_loss(inst.state, inst.batch, inst.masks);
  EXPECT_EQ(loss.grads.centroids.cwiseAbs().maxCoeff(), 0.0);
}

TEST(GradientTest, GammaScalesContrastiveGradient) {
  GradInstance a = random_grad_instance(11, false, true, 1.0);
  GradInstance b = a;
  b.state.config.gamma = 2.5;
  const JointLoss la = joint_loss(a.state, a.batch, a.masks);
  const JointLoss lb = joint_loss(b.state, b.batch, b.masks);
  EXPECT_NEAR(lb.value, 2.5 * la.value, 1e-12);
  EXPECT_TRUE(lb.grads.head.w1.isApprox(2.5 * la.grads.head.w1, 1e-12));
}

}  // namespace
}  // namespace oodkit
