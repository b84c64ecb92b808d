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
#include <string_view>

#include "oodkit/linalg.hpp"
#include "oodkit/random.hpp"

namespace oodkit {

enum class Activation { relu, tanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

// in -> hidden -> out with one elementwise nonlinearity after the hidden
// layer. Weights are stored (out x in).
struct TwoLayerNet {
  Matrix w1;  // hidden x in
  Vector b1;
  Matrix w2;  // out x hidden
  Vector b2;
  Activation activation = Activation::relu;

  std::size_t in_dim() const { return static_cast<std::size_t>(w1.cols()); }
  std::size_t hidden_dim() const { return static_cast<std::size_t>(w1.rows()); }
  std::size_t out_dim() const { return static_cast<std::size_t>(w2.rows()); }

  bool operator==(const TwoLayerNet& o) const {
    return same_values(w1, o.w1) && same_values(b1, o.b1) && same_values(w2, o.w2) &&
           same_values(b2, o.b2) && activation == o.activation;
  }
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
TwoLayerNet make_two_layer_net(std::size_t in, std::size_t hidden, std::size_t out,
                               Activation activation, Rng& rng);

struct NetGrad {
  Matrix w1;
  Vector b1;
  Matrix w2;
  Vector b2;

  static NetGrad zeros_like(const TwoLayerNet& net);
};

// Intermediate values kept for the backward pass.
struct NetCache {
  Matrix input;
  Matrix pre;     // pre-activation, rows x hidden
  Matrix hidden;  // after activation and dropout scaling
  Matrix mask;    // empty when no dropout was applied
};

// Batch forward. `mask`, when given, multiplies the hidden activations
// elementwise (inverted-dropout scales: 0 or 1/(1-rho)).
Matrix forward(const TwoLayerNet& net, const Matrix& input, const Matrix* mask = nullptr,
               NetCache* cache = nullptr);

// Accumulates parameter gradients into `grad` and returns d(loss)/d(input).
Matrix backward(const TwoLayerNet& net, const NetCache& cache, const Matrix& d_output,
                NetGrad& grad);

// Trainable encoder over frozen base embeddings; dropout on the hidden
// activations provides the two views of an input.
struct EncoderHead {
  TwoLayerNet net;
  double dropout = 0.1;

  bool operator==(const EncoderHead&) const = default;
};

// Two-layer projection feeding the contrastive loss.
struct ProjectionHead {
  TwoLayerNet net;

  bool operator==(const ProjectionHead&) const = default;
};

// rows x hidden matrix of inverted-dropout scales.
Matrix sample_dropout_mask(std::size_t rows, std::size_t hidden, double rho, Rng& rng);

// Single-vector forward. Deterministic mode (no seed) uses the dropout
// expectation, which for inverted dropout is the unmasked network; with a
// seed each hidden unit is zeroed with probability rho and survivors are
// scaled by 1/(1-rho). Throws DataError on a dimension mismatch.
Vector head_forward(const EncoderHead& head, std::span<const double> base_vec,
                    std::optional<std::uint64_t> dropout_seed = std::nullopt);

// Deterministic batch forward.
Matrix encode(const EncoderHead& head, const Matrix& base);

}  // namespace oodkit
