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
#include <optional>
#include <span>
#include <vector>

#include "oodkit/embeddings.hpp"
#include "oodkit/encoder.hpp"
#include "oodkit/kmeans.hpp"
#include "oodkit/linalg.hpp"

namespace oodkit {

enum class Optimizer { adam, sgd };

std::string_view to_string(Optimizer o);
Optimizer parse_optimizer(std::string_view text);

struct TrainConfig {
  int k = 8;                 // number of centroids
  double gamma = 1.0;        // weight of the contrastive term
  double tau = 0.5;          // NT-Xent temperature
  double alpha = 1.0;        // Student's t degrees of freedom
  int batch_size = 64;
  int epochs = 15;
  double learning_rate = 1e-2;
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  bool cluster_loss_on = true;
  bool cl_loss_on = true;
  bool deterministic_q = false;  // soft assignments from the dropout-free pass
  // Zero means "same as the input dimension".
  int hidden_dim = 0;
  int out_dim = 0;
  int proj_hidden_dim = 0;
  int proj_dim = 0;
  double dropout = 0.1;
  Activation activation = Activation::relu;
  KMeansOptions kmeans;

  // Throws UsageError on out-of-range values.
  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

struct EpochLoss {
  double joint = 0.0;
  double cluster = 0.0;
  double contrastive = 0.0;

  bool operator==(const EpochLoss&) const = default;
};

struct EncoderState {
  EncoderHead head;
  ProjectionHead projection;
  Matrix centroids;  // K x out_dim
  TrainConfig config;
  std::vector<EpochLoss> loss_trace;

  std::size_t base_dim() const { return head.net.in_dim(); }
  std::size_t out_dim() const { return head.net.out_dim(); }

  bool operator==(const EncoderState& o) const {
    return head == o.head && projection == o.projection && same_values(centroids, o.centroids) &&
           config == o.config && loss_trace == o.loss_trace;
  }
};

struct EncoderGrads {
  NetGrad head;
  NetGrad projection;
  Matrix centroids;

  static EncoderGrads zeros_like(const EncoderState& state);
};

// Flat views over every trainable tensor, in a fixed order shared by the two
// functions (head w1 b1 w2 b2, projection w1 b1 w2 b2, centroids).
std::vector<std::span<double>> parameter_spans(EncoderState& state);
std::vector<std::span<double>> gradient_spans(EncoderGrads& grads);

// Dropout masks for the two views of a batch (rows x hidden each).
struct ViewMasks {
  Matrix view0;
  Matrix view1;
};

struct JointLoss {
  double value = 0.0;
  double cluster = 0.0;
  double contrastive = 0.0;
  Matrix q;
  Matrix p;
  EncoderGrads grads;
  bool clamped = false;
};

// value = cluster_loss + gamma * contrastive_loss for the enabled terms.
double joint_loss_value(const Matrix& p, const Matrix& q, const Matrix& z,
                        const TrainConfig& cfg);

// Loss and analytic gradients on one batch with the given view masks.
// Targets P are derived from Q (and treated as constants) unless
// `fixed_targets` is supplied. Centroids receive gradient only through Q.
JointLoss joint_loss(const EncoderState& state, const Matrix& batch, const ViewMasks& masks,
                     const Matrix* fixed_targets = nullptr);

// Seeded head/projection initialisation and k-means centroids over the
// deterministic embeddings of `base_train`.
EncoderState initialize_state(const Matrix& base_train, const TrainConfig& cfg);

// Full training run. Throws DataError when there are fewer rows than
// max(K, batch size), NumericError on a non-finite loss.
EncoderState train(const Matrix& base_train, const TrainConfig& cfg);

// Deterministic forward of every row.
Matrix embed(const EncoderState& state, const Matrix& base);
EmbeddingSet embed_corpus(const EncoderState& state, const EmbeddingSet& base);

// Cluster loss over a whole matrix with deterministic embeddings and
// targets computed over all rows.
double full_cluster_loss(const EncoderState& state, const Matrix& base);

}  // namespace oodkit
