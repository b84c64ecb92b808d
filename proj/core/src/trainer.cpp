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

#include "oodkit/trainer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "oodkit/error.hpp"
#include "oodkit/log.hpp"
#include "oodkit/losses.hpp"
#include "oodkit/random.hpp"

namespace oodkit {

std::string_view to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

Optimizer parse_optimizer(std::string_view text) {
  if (text == "adam") return Optimizer::adam;
  if (text == "sgd") return Optimizer::sgd;
  throw UsageError("unknown optimizer \"" + std::string(text) + "\"");
}

void TrainConfig::validate() const {
  const auto fail = [](const std::string& what) { throw UsageError("train config: " + what); };
  if (k < 1) fail("K must be >= 1");
  if (cluster_loss_on && k < 2) fail("K must be >= 2 when the cluster loss is on");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (!(tau > 0.0)) fail("tau must be > 0");
  if (!(alpha > 0.0)) fail("alpha must be > 0");
  if (batch_size < 1) fail("batch size must be >= 1");
  if (cl_loss_on && batch_size < 2) fail("batch size must be >= 2 when the contrastive loss is on");
  if (epochs < 0) fail("epochs must be >= 0");
  if (!(learning_rate > 0.0)) fail("learning rate must be > 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must lie in [0, 1)");
  if (hidden_dim < 0 || out_dim < 0 || proj_hidden_dim < 0 || proj_dim < 0) fail("negative layer width");
  if (out_dim == 1 || proj_dim == 1) fail("output and projection widths must be >= 2");
}

EncoderGrads EncoderGrads::zeros_like(const EncoderState& state) {
  return {NetGrad::zeros_like(state.head.net), NetGrad::zeros_like(state.projection.net),
          Matrix::Zero(state.centroids.rows(), state.centroids.cols())};
}

namespace {

template <class M>
std::span<double> as_span(M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <class Net>
void append_spans(std::vector<std::span<double>>& out, Net& n) {
  out.push_back(as_span(n.w1));
  out.push_back(as_span(n.b1));
  out.push_back(as_span(n.w2));
  out.push_back(as_span(n.b2));
}

// Rows of a and b interleaved: a0, b0, a1, b1, ...
Matrix interleave(const Matrix& a, const Matrix& b) {
  Matrix out(2 * a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out.row(2 * i) = a.row(i);
    out.row(2 * i + 1) = b.row(i);
  }
  return out;
}

}  // namespace

std::vector<std::span<double>> parameter_spans(EncoderState& state) {
  std::vector<std::span<double>> out;
  append_spans(out, state.head.net);
  append_spans(out, state.projection.net);
  out.push_back(as_span(state.centroids));
  return out;
}

std::vector<std::span<double>> gradient_spans(EncoderGrads& grads) {
  std::vector<std::span<double>> out;
  append_spans(out, grads.head);
  append_spans(out, grads.projection);
  out.push_back(as_span(grads.centroids));
  return out;
}

double joint_loss_value(const Matrix& p, const Matrix& q, const Matrix& z, const TrainConfig& cfg) {
  double value = 0.0;
  if (cfg.cluster_loss_on) value += cluster_loss(p, q);
  if (cfg.cl_loss_on) value += cfg.gamma * contrastive_loss(z, cfg.tau);
  return value;
}

JointLoss joint_loss(const EncoderState& state, const Matrix& batch, const ViewMasks& masks,
                     const Matrix* fixed_targets) {
  const TrainConfig& cfg = state.config;
  JointLoss out;
  out.grads = EncoderGrads::zeros_like(state);

  NetCache cache0;
  NetCache cache1;
  NetCache cache_det;
  const Matrix e0 = forward(state.head.net, batch, &masks.view0, &cache0);
  Matrix d_e0 = Matrix::Zero(e0.rows(), e0.cols());

  if (cfg.cluster_loss_on) {
    const bool det = cfg.deterministic_q;
    const Matrix e_q = det ? forward(state.head.net, batch, nullptr, &cache_det) : e0;
    const Matrix q = soft_assign(e_q, state.centroids, cfg.alpha);
    out.p = fixed_targets != nullptr ? *fixed_targets : target_distribution(q);
    auto cg = cluster_loss_with_grad(e_q, state.centroids, out.p, cfg.alpha);
    out.q = std::move(cg.q);
    out.cluster = cg.value;
    out.clamped = cg.clamped;
    out.grads.centroids += cg.d_centroids;
    if (det) {
      backward(state.head.net, cache_det, cg.d_embeddings, out.grads.head);
    } else {
      d_e0 += cg.d_embeddings;
    }
  }

  if (cfg.cl_loss_on) {
    const Matrix e1 = forward(state.head.net, batch, &masks.view1, &cache1);
    NetCache proj_cache;
    const Matrix z = forward(state.projection.net, interleave(e0, e1), nullptr, &proj_cache);
    auto cl = contrastive_loss_with_grad(z, cfg.tau);
    out.contrastive = cl.value;
    const Matrix d_in =
        backward(state.projection.net, proj_cache, cfg.gamma * cl.d_z, out.grads.projection);
    Matrix d_e1(e1.rows(), e1.cols());
    for (Eigen::Index i = 0; i < e0.rows(); ++i) {
      d_e0.row(i) += d_in.row(2 * i);
      d_e1.row(i) = d_in.row(2 * i + 1);
    }
    backward(state.head.net, cache1, d_e1, out.grads.head);
  }

  if (cfg.cluster_loss_on || cfg.cl_loss_on) backward(state.head.net, cache0, d_e0, out.grads.head);
  out.value = (cfg.cluster_loss_on ? out.cluster : 0.0) +
              (cfg.cl_loss_on ? cfg.gamma * out.contrastive : 0.0);
  return out;
}

EncoderState initialize_state(const Matrix& base_train, const TrainConfig& cfg) {
  cfg.validate();
  if (base_train.rows() == 0) throw DataError("no training embeddings");
  const auto base_dim = static_cast<std::size_t>(base_train.cols());
  const auto pick = [](int v, std::size_t fallback) {
    return v > 0 ? static_cast<std::size_t>(v) : fallback;
  };
  const std::size_t hidden = pick(cfg.hidden_dim, base_dim);
  const std::size_t out = pick(cfg.out_dim, base_dim);
  const std::size_t proj_hidden = pick(cfg.proj_hidden_dim, out);
  const std::size_t proj = pick(cfg.proj_dim, out);
  if (out < 2 || proj < 2) throw UsageError("output and projection widths must be >= 2");

  Rng init_rng(derive_seed(cfg.seed, 1));
  EncoderState state;
  state.config = cfg;
  state.head.net = make_two_layer_net(base_dim, hidden, out, cfg.activation, init_rng);
  state.head.dropout = cfg.dropout;
  state.projection.net = make_two_layer_net(out, proj_hidden, proj, cfg.activation, init_rng);
  const Matrix e = encode(state.head, base_train);
  state.centroids =
      kmeans(e, static_cast<std::size_t>(cfg.k), derive_seed(cfg.seed, 2), cfg.kmeans).centroids;
  return state;
}

namespace {

class AdamState {
 public:
  explicit AdamState(const std::vector<std::span<double>>& params) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  }

  void step(std::vector<std::span<double>>& params, const std::vector<std::span<double>>& grads,
            const TrainConfig& cfg) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t_));
    for (std::size_t s = 0; s < params.size(); ++s) {
      for (std::size_t i = 0; i < params[s].size(); ++i) {
        const double g = grads[s][i];
        m_[s][i] = cfg.beta1 * m_[s][i] + (1.0 - cfg.beta1) * g;
        v_[s][i] = cfg.beta2 * v_[s][i] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m_[s][i] / c1;
        const double v_hat = v_[s][i] / c2;
        params[s][i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
      }
    }
  }

 private:
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long t_ = 0;
};

void sgd_step(std::vector<std::span<double>>& params, const std::vector<std::span<double>>& grads,
              double lr) {
  for (std::size_t s = 0; s < params.size(); ++s) {
    for (std::size_t i = 0; i < params[s].size(); ++i) params[s][i] -= lr * grads[s][i];
  }
}

std::string trace_text(const std::vector<EpochLoss>& trace) {
  std::ostringstream os;
  for (std::size_t e = 0; e < trace.size(); ++e) {
    os << "\n  epoch " << e << ": joint=" << trace[e].joint << " cluster=" << trace[e].cluster
       << " cl=" << trace[e].contrastive;
  }
  return os.str();
}

}  // namespace

EncoderState train(const Matrix& base_train, const TrainConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(base_train.rows());
  const auto needed = static_cast<std::size_t>(std::max(cfg.k, cfg.batch_size));
  if (n < needed) {
    throw DataError("training needs at least max(K, batch size) = " + std::to_string(needed) +
                    " rows, got " + std::to_string(n));
  }
  EncoderState state = initialize_state(base_train, cfg);
  auto params = parameter_spans(state);
  AdamState adam(params);
  Rng rng(derive_seed(cfg.seed, 3));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  const std::size_t hidden = state.head.net.hidden_dim();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    EpochLoss sums;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t m = std::min(batch, n - start);
      if (cfg.cl_loss_on && m < 2) continue;
      Matrix x(static_cast<Eigen::Index>(m), base_train.cols());
      for (std::size_t i = 0; i < m; ++i) {
        x.row(static_cast<Eigen::Index>(i)) = base_train.row(static_cast<Eigen::Index>(order[start + i]));
      }
      ViewMasks masks{sample_dropout_mask(m, hidden, cfg.dropout, rng),
                      sample_dropout_mask(m, hidden, cfg.dropout, rng)};
      JointLoss loss;
      try {
        loss = joint_loss(state, x, masks);
      } catch (const NumericError& e) {
        state.loss_trace.push_back(sums);
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + " (" +
                           e.what() + ")" + trace_text(state.loss_trace));
      }
      if (!std::isfinite(loss.value)) {
        state.loss_trace.push_back(sums);
        throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                           " (non-finite loss)" + trace_text(state.loss_trace));
      }
      auto grads = gradient_spans(loss.grads);
      if (cfg.optimizer == Optimizer::adam) {
        adam.step(params, grads, cfg);
      } else {
        sgd_step(params, grads, cfg.learning_rate);
      }
      sums.joint += loss.value;
      sums.cluster += loss.cluster;
      sums.contrastive += loss.contrastive;
      ++steps;
    }
    if (steps > 0) {
      const auto s = static_cast<double>(steps);
      sums.joint /= s;
      sums.cluster /= s;
      sums.contrastive /= s;
    }
    state.loss_trace.push_back(sums);
    log::debug("epoch " + std::to_string(epoch) + " loss " + std::to_string(sums.joint));
  }
  return state;
}

Matrix embed(const EncoderState& state, const Matrix& base) { return encode(state.head, base); }

EmbeddingSet embed_corpus(const EncoderState& state, const EmbeddingSet& base) {
  if (base.dim() != state.base_dim()) {
    throw DataError("embeddings have dimension " + std::to_string(base.dim()) +
                    ", encoder expects " + std::to_string(state.base_dim()));
  }
  return EmbeddingSet(base.ids(), embed(state, base.values()));
}

double full_cluster_loss(const EncoderState& state, const Matrix& base) {
  const Matrix q = soft_assign(embed(state, base), state.centroids, state.config.alpha);
  return cluster_loss(target_distribution(q), q);
}

}  // namespace oodkit
