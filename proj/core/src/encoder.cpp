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

#include "oodkit/encoder.hpp"

#include <cmath>
#include <string>

#include "oodkit/error.hpp"

namespace oodkit {

std::string_view to_string(Activation a) {
  return a == Activation::relu ? "relu" : "tanh";
}

Activation parse_activation(std::string_view text) {
  if (text == "relu") return Activation::relu;
  if (text == "tanh") return Activation::tanh;
  throw UsageError("unknown activation \"" + std::string(text) + "\"");
}

TwoLayerNet make_two_layer_net(std::size_t in, std::size_t hidden, std::size_t out,
                               Activation activation, Rng& rng) {
  const auto fill = [&rng](Eigen::Index rows, Eigen::Index cols, double bound) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
    }
    return m;
  };
  const auto hi = static_cast<Eigen::Index>(hidden);
  const auto io = static_cast<Eigen::Index>(out);
  TwoLayerNet net;
  net.activation = activation;
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(in));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  net.w1 = fill(hi, static_cast<Eigen::Index>(in), bound1);
  net.b1 = fill(hi, 1, bound1).col(0);
  net.w2 = fill(io, hi, bound2);
  net.b2 = fill(io, 1, bound2).col(0);
  return net;
}

NetGrad NetGrad::zeros_like(const TwoLayerNet& net) {
  return {Matrix::Zero(net.w1.rows(), net.w1.cols()), Vector::Zero(net.b1.size()),
          Matrix::Zero(net.w2.rows(), net.w2.cols()), Vector::Zero(net.b2.size())};
}

Matrix forward(const TwoLayerNet& net, const Matrix& input, const Matrix* mask, NetCache* cache) {
  if (static_cast<std::size_t>(input.cols()) != net.in_dim()) {
    throw DataError("input dimension " + std::to_string(input.cols()) + " does not match " +
                    std::to_string(net.in_dim()));
  }
  Matrix pre = input * net.w1.transpose();
  pre.rowwise() += net.b1.transpose();
  Matrix hidden = net.activation == Activation::relu ? Matrix(pre.cwiseMax(0.0))
                                                     : Matrix(pre.array().tanh().matrix());
  if (mask != nullptr) hidden = hidden.cwiseProduct(*mask);
  Matrix out = hidden * net.w2.transpose();
  out.rowwise() += net.b2.transpose();
  if (cache != nullptr) {
    cache->input = input;
    cache->pre = std::move(pre);
    cache->hidden = std::move(hidden);
    cache->mask = mask != nullptr ? *mask : Matrix();
  }
  return out;
}

Matrix backward(const TwoLayerNet& net, const NetCache& cache, const Matrix& d_output,
                NetGrad& grad) {
  grad.w2.noalias() += d_output.transpose() * cache.hidden;
  grad.b2 += d_output.colwise().sum().transpose();
  Matrix d_hidden = d_output * net.w2;
  if (cache.mask.size() != 0) d_hidden = d_hidden.cwiseProduct(cache.mask);
  Matrix d_pre;
  if (net.activation == Activation::relu) {
    d_pre = d_hidden.array() * (cache.pre.array() > 0.0).cast<double>();
  } else {
    d_pre = d_hidden.array() * (1.0 - cache.pre.array().tanh().square());
  }
  grad.w1.noalias() += d_pre.transpose() * cache.input;
  grad.b1 += d_pre.colwise().sum().transpose();
  return d_pre * net.w1;
}

Matrix sample_dropout_mask(std::size_t rows, std::size_t hidden, double rho, Rng& rng) {
  Matrix mask(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(hidden));
  if (rho <= 0.0) {
    mask.setOnes();
    return mask;
  }
  const double keep_scale = 1.0 / (1.0 - rho);
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask.cols(); ++j) {
      mask(i, j) = rng.bernoulli(rho) ? 0.0 : keep_scale;
    }
  }
  return mask;
}

Vector head_forward(const EncoderHead& head, std::span<const double> base_vec,
                    std::optional<std::uint64_t> dropout_seed) {
  if (base_vec.size() != head.net.in_dim()) {
    throw DataError("base vector has dimension " + std::to_string(base_vec.size()) +
                    ", head expects " + std::to_string(head.net.in_dim()));
  }
  Matrix x(1, static_cast<Eigen::Index>(base_vec.size()));
  for (std::size_t j = 0; j < base_vec.size(); ++j) x(0, static_cast<Eigen::Index>(j)) = base_vec[j];
  if (!dropout_seed) return forward(head.net, x).row(0).transpose();
  Rng rng(*dropout_seed);
  const Matrix mask = sample_dropout_mask(1, head.net.hidden_dim(), head.dropout, rng);
  return forward(head.net, x, &mask).row(0).transpose();
}

Matrix encode(const EncoderHead& head, const Matrix& base) { return forward(head.net, base); }

}  // namespace oodkit
