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

#include "oodkit/linalg.hpp"

namespace oodkit {

// Student's t kernel similarity of each embedding row to each centroid,
// normalised over centroids: q_k ~ (1 + |e - mu_k|^2 / alpha)^(-(alpha+1)/2).
// Returns rows x K, each row summing to 1.
Matrix soft_assign(const Matrix& embeddings, const Matrix& centroids, double alpha);

// Sharpened, frequency-normalised targets p_ik ~ q_ik^2 / f_k with
// f_k = sum_i q_ik over the batch. Cluster frequencies below 1e-12 are
// floored at 1e-12.
Matrix target_distribution(const Matrix& q);

// Mean over rows of KL(p_i || q_i), with 0 ln 0 = 0. Entries of q below
// 1e-12 where p > 0 are clamped to 1e-12 and `clamped` is set.
double cluster_loss(const Matrix& p, const Matrix& q, bool* clamped = nullptr);

struct ClusterLossGrad {
  double value = 0.0;
  Matrix q;
  Matrix d_embeddings;  // rows x dim
  Matrix d_centroids;   // K x dim
  bool clamped = false;
};

// Cluster loss and its gradient with the targets p held constant.
ClusterLossGrad cluster_loss_with_grad(const Matrix& embeddings, const Matrix& centroids,
                                       const Matrix& p, double alpha);

// NT-Xent over 2M rows arranged as positive pairs (2i, 2i+1), cosine
// similarity at temperature tau, averaged over all 2M anchors; each anchor's
// denominator runs over every other row. Throws NumericError on a zero-norm
// row.
double contrastive_loss(const Matrix& z, double tau);

struct ContrastiveLossGrad {
  double value = 0.0;
  Matrix d_z;
};

ContrastiveLossGrad contrastive_loss_with_grad(const Matrix& z, double tau);

}  // namespace oodkit
