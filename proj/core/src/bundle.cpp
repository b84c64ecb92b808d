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

#include "oodkit/bundle.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "oodkit/digest.hpp"
#include "oodkit/error.hpp"

namespace oodkit {

using nlohmann::json;

std::string_view to_string(ScoreMethod m) { return m == ScoreMethod::density ? "density" : "ln"; }

ScoreMethod parse_score_method(std::string_view text) {
  if (text == "density") return ScoreMethod::density;
  if (text == "ln") return ScoreMethod::ln;
  throw DataError("unknown score method \"" + std::string(text) + "\"");
}

namespace {

template <class M>
json matrix_json(const M& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw DataError("matrix payload size does not match its shape");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
      m(i, j2) = data.at(static_cast<std::size_t>(i * cols + j2)).get<double>();
    }
  }
  return m;
}

Vector vector_from(const json& j) {
  const Matrix m = matrix_from(j);
  if (m.cols() != 1) throw DataError("expected a column vector");
  return m.col(0);
}

json net_json(const TwoLayerNet& n) {
  return {{"activation", std::string(to_string(n.activation))},
          {"w1", matrix_json(n.w1)},
          {"b1", matrix_json(n.b1)},
          {"w2", matrix_json(n.w2)},
          {"b2", matrix_json(n.b2)}};
}

TwoLayerNet net_from(const json& j) {
  TwoLayerNet n;
  try {
    n.activation = parse_activation(j.at("activation").get<std::string>());
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  n.w1 = matrix_from(j.at("w1"));
  n.b1 = vector_from(j.at("b1"));
  n.w2 = matrix_from(j.at("w2"));
  n.b2 = vector_from(j.at("b2"));
  if (n.b1.size() != n.w1.rows() || n.w2.cols() != n.w1.rows() || n.b2.size() != n.w2.rows()) {
    throw DataError("network layer shapes are inconsistent");
  }
  return n;
}

json train_config_json(const TrainConfig& c) {
  return {{"k", c.k},
          {"gamma", c.gamma},
          {"tau", c.tau},
          {"alpha", c.alpha},
          {"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"optimizer", std::string(to_string(c.optimizer))},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"adam_epsilon", c.adam_epsilon},
          {"seed", c.seed},
          {"cluster_loss_on", c.cluster_loss_on},
          {"cl_loss_on", c.cl_loss_on},
          {"deterministic_q", c.deterministic_q},
          {"hidden_dim", c.hidden_dim},
          {"out_dim", c.out_dim},
          {"proj_hidden_dim", c.proj_hidden_dim},
          {"proj_dim", c.proj_dim},
          {"dropout", c.dropout},
          {"activation", std::string(to_string(c.activation))},
          {"kmeans_max_iters", c.kmeans.max_iters},
          {"kmeans_tol", c.kmeans.tol}};
}

TrainConfig train_config_from(const json& j) {
  TrainConfig c;
  c.k = j.at("k").get<int>();
  c.gamma = j.at("gamma").get<double>();
  c.tau = j.at("tau").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.adam_epsilon = j.at("adam_epsilon").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.cluster_loss_on = j.at("cluster_loss_on").get<bool>();
  c.cl_loss_on = j.at("cl_loss_on").get<bool>();
  c.deterministic_q = j.at("deterministic_q").get<bool>();
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.out_dim = j.at("out_dim").get<int>();
  c.proj_hidden_dim = j.at("proj_hidden_dim").get<int>();
  c.proj_dim = j.at("proj_dim").get<int>();
  c.dropout = j.at("dropout").get<double>();
  c.kmeans.max_iters = j.at("kmeans_max_iters").get<int>();
  c.kmeans.tol = j.at("kmeans_tol").get<double>();
  try {
    c.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
    c.activation = parse_activation(j.at("activation").get<std::string>());
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  return c;
}

json encoder_json(const EncoderState& s) {
  json trace = json::array();
  for (const auto& e : s.loss_trace) trace.push_back({e.joint, e.cluster, e.contrastive});
  return {{"head", net_json(s.head.net)},
          {"dropout", s.head.dropout},
          {"projection", net_json(s.projection.net)},
          {"centroids", matrix_json(s.centroids)},
          {"train_config", train_config_json(s.config)},
          {"loss_trace", trace}};
}

EncoderState encoder_from(const json& j) {
  EncoderState s;
  s.head.net = net_from(j.at("head"));
  s.head.dropout = j.at("dropout").get<double>();
  s.projection.net = net_from(j.at("projection"));
  s.centroids = matrix_from(j.at("centroids"));
  s.config = train_config_from(j.at("train_config"));
  for (const auto& e : j.at("loss_trace")) {
    s.loss_trace.push_back({e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>()});
  }
  if (s.projection.net.in_dim() != s.head.net.out_dim() ||
      static_cast<std::size_t>(s.centroids.cols()) != s.head.net.out_dim()) {
    throw DataError("encoder components have inconsistent dimensions");
  }
  return s;
}

json gmm_json(const GmmModel& g) {
  return {{"weights", matrix_json(g.weights)},
          {"means", matrix_json(g.means)},
          {"variances", matrix_json(g.variances)},
          {"variance_floor", g.variance_floor},
          {"fit_log", g.fit_log}};
}

GmmModel gmm_from(const json& j) {
  GmmModel g;
  g.weights = vector_from(j.at("weights"));
  g.means = matrix_from(j.at("means"));
  g.variances = matrix_from(j.at("variances"));
  g.variance_floor = j.at("variance_floor").get<double>();
  g.fit_log = j.at("fit_log").get<std::vector<double>>();
  if (g.means.rows() != g.weights.size() || g.variances.rows() != g.means.rows() ||
      g.variances.cols() != g.means.cols() || g.weights.size() == 0) {
    throw DataError("GMM parameter shapes are inconsistent");
  }
  return g;
}

}  // namespace

json bundle_to_json(const ModelBundle& b) {
  json j = {{"format", "oodkit-model"},
            {"format_version", b.format_version},
            {"method", std::string(to_string(b.method))},
            {"config", b.config},
            {"provenance",
             {{"seed", b.provenance.seed},
              {"created_at", b.provenance.created_at},
              {"tool_version", b.provenance.tool_version}}}};
  if (b.encoder) j["encoder"] = encoder_json(*b.encoder);
  if (b.gmm) j["gmm"] = gmm_json(*b.gmm);
  if (b.threshold) j["threshold"] = *b.threshold;
  return j;
}

ModelBundle bundle_from_json(const json& j) {
  try {
    if (!j.is_object()) throw DataError("model bundle must be a JSON object");
    const int version = j.at("format_version").get<int>();
    if (version != kBundleFormatVersion) {
      throw DataError("unsupported model bundle format_version " + std::to_string(version));
    }
    ModelBundle b;
    b.format_version = version;
    b.method = parse_score_method(j.at("method").get<std::string>());
    b.config = j.at("config");
    const auto& p = j.at("provenance");
    b.provenance.seed = p.at("seed").get<std::uint64_t>();
    b.provenance.created_at = p.at("created_at").get<std::string>();
    b.provenance.tool_version = p.at("tool_version").get<std::string>();
    if (j.contains("encoder")) b.encoder = encoder_from(j.at("encoder"));
    if (j.contains("gmm")) b.gmm = gmm_from(j.at("gmm"));
    if (j.contains("threshold")) b.threshold = j.at("threshold").get<double>();
    if (b.encoder && b.gmm && b.encoder->out_dim() != b.gmm->dim()) {
      throw DataError("encoder output and GMM dimensions differ");
    }
    return b;
  } catch (const json::exception& e) {
    throw DataError(std::string("model bundle schema mismatch: ") + e.what());
  }
}

std::string serialize_bundle(const ModelBundle& bundle) { return bundle_to_json(bundle).dump(1) + "\n"; }

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model bundle " + path.string());
  out << serialize_bundle(bundle);
}

ModelBundle load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model bundle " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return bundle_from_json(j);
}

std::string bundle_digest(const ModelBundle& bundle) { return sha256_hex(serialize_bundle(bundle)); }

void require_servable(const ModelBundle& bundle) {
  if (!bundle.threshold) throw DataError("model bundle has no threshold; cannot serve");
  if (bundle.method == ScoreMethod::density && !bundle.gmm) {
    throw DataError("model bundle has no fitted density (gmm); cannot serve");
  }
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  // Reproducible-build convention: a fixed epoch makes bundles byte-stable.
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0') now = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace oodkit
