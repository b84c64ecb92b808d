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

// Independent reference implementations used as test oracles.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "oodkit/encoder.hpp"
#include "oodkit/losses.hpp"
#include "oodkit/random.hpp"
#include "oodkit/trainer.hpp"

namespace oodkit::testing {

// O(n_ood * n_id) pairwise AUROC, ties counted 1/2.
inline double brute_auroc(const std::vector<double>& ood, const std::vector<double>& id) {
  double wins = 0.0;
  for (double o : ood) {
    for (double i : id) wins += o > i ? 1.0 : (o == i ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(ood.size()) * static_cast<double>(id.size()));
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  }
  return m;
}

struct GradCheck {
  // max over parameter blocks of |a - n| / max(|a|, |n|, block floor)
  // (Euclidean norms)
  double max_rel_error = 0.0;
  // max over single coordinates, same formula with an absolute floor
  double max_elementwise_rel_error = 0.0;
  std::size_t checked = 0;
};

// Relative error |a - n| / max(|a|, |n|, floor); the floor keeps entries whose
// true derivative is ~0 from dominating through cancellation noise.
inline double rel_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Central differences of `loss` over every coordinate of `params`, compared
// with `analytic` (same layout). Blocks are the spans of `params`. A block
// whose gradient norm is below `block_floor` is judged on absolute error
// scaled by the floor: its relative error would otherwise measure only the
// ~eps*|loss|/h cancellation noise of the differences.
inline GradCheck check_gradient(const std::vector<std::span<double>>& params,
                                const std::vector<std::span<double>>& analytic,
                                const std::function<double()>& loss, double h = 1e-4,
                                double block_floor = 1e-4) {
  GradCheck out;
  for (std::size_t s = 0; s < params.size(); ++s) {
    double diff2 = 0.0;
    double a2 = 0.0;
    double n2 = 0.0;
    for (std::size_t i = 0; i < params[s].size(); ++i) {
      const double saved = params[s][i];
      params[s][i] = saved + h;
      const double up = loss();
      params[s][i] = saved - h;
      const double down = loss();
      params[s][i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      out.max_elementwise_rel_error =
          std::max(out.max_elementwise_rel_error, rel_error(analytic[s][i], numeric));
      diff2 += (analytic[s][i] - numeric) * (analytic[s][i] - numeric);
      a2 += analytic[s][i] * analytic[s][i];
      n2 += numeric * numeric;
      ++out.checked;
    }
    const double scale = std::max(std::sqrt(std::max(a2, n2)), block_floor);
    out.max_rel_error = std::max(out.max_rel_error, std::sqrt(diff2) / scale);
  }
  return out;
}

// Smallest |pre-activation| over both views of the head and the projection
// of the interleaved views. ReLU is not differentiable at 0, so finite
// differences are only meaningful when this is well above the step size.
inline double min_abs_preactivation(const EncoderState& state, const Matrix& batch,
                                    const ViewMasks& masks) {
  NetCache c0;
  NetCache c1;
  NetCache cp;
  const Matrix e0 = forward(state.head.net, batch, &masks.view0, &c0);
  const Matrix e1 = forward(state.head.net, batch, &masks.view1, &c1);
  Matrix z_in(2 * e0.rows(), e0.cols());
  for (Eigen::Index i = 0; i < e0.rows(); ++i) {
    z_in.row(2 * i) = e0.row(i);
    z_in.row(2 * i + 1) = e1.row(i);
  }
  forward(state.projection.net, z_in, nullptr, &cp);
  return std::min({c0.pre.cwiseAbs().minCoeff(), c1.pre.cwiseAbs().minCoeff(), cp.pre.cwiseAbs().minCoeff()});
}

// Smallest row norm of the projection output. NT-Xent normalises each row,
// and that map has curvature ~1/|z|^2, so central differences lose accuracy
// as a row approaches zero.
inline double min_projection_norm(const EncoderState& state, const Matrix& batch, const ViewMasks& masks) {
  const Matrix e0 = forward(state.head.net, batch, &masks.view0, nullptr);
  const Matrix e1 = forward(state.head.net, batch, &masks.view1, nullptr);
  Matrix z_in(2 * e0.rows(), e0.cols());
  for (Eigen::Index i = 0; i < e0.rows(); ++i) {
    z_in.row(2 * i) = e0.row(i);
    z_in.row(2 * i + 1) = e1.row(i);
  }
  return forward(state.projection.net, z_in, nullptr, nullptr).rowwise().norm().minCoeff();
}

}  // namespace oodkit::testing
