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

#include "oodkit/cli/service.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>

#include "oodkit/error.hpp"
#include "oodkit/gmm.hpp"
#include "oodkit/likelihood.hpp"
#include "oodkit/log.hpp"
#include "oodkit/pipeline.hpp"

namespace oodkit::service {

using nlohmann::json;

void ProviderConfig::validate() const {
  if (url.empty()) throw UsageError("provider url is empty");
  if (url.rfind("http://", 0) != 0) throw UsageError("provider url must start with http://: " + url);
  if (timeout_ms <= 0) throw UsageError("provider timeout must be > 0 ms");
  if (retries < 0) throw UsageError("provider retries must be >= 0");
}

namespace {

struct UrlParts {
  std::string origin;  // scheme://host:port
  std::string path;
};

UrlParts split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw UsageError("provider url must start with http://: " + url);
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/embed"};
  std::string path = url.substr(slash);
  if (path == "/") path = "/embed";
  return {url.substr(0, slash), path};
}

std::vector<double> numeric_array(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw UsageError(std::string("\"") + what + "\" must be a nonempty array of numbers");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw UsageError(std::string("\"") + what + "\" must contain numbers only");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw UsageError(std::string("\"") + what + "\" has a non-finite value");
    out.push_back(x);
  }
  return out;
}

}  // namespace

EmbeddingSet fetch_embeddings(const ProviderConfig& provider, const std::vector<std::string>& texts) {
  provider.validate();
  const UrlParts url = split_url(provider.url);
  const std::string body = json{{"texts", texts}}.dump();

  std::string last_error;
  int backoff = provider.backoff_ms;
  for (int attempt = 0; attempt <= provider.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    httplib::Client client(url.origin);
    const auto timeout = std::chrono::milliseconds(provider.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(url.path, body, "application/json");
    if (!res) {
      last_error = "transport failure (" + httplib::to_string(res.error()) + ")";
      log::warn("embedding provider attempt " + std::to_string(attempt + 1) + ": " + last_error);
      continue;
    }
    if (res->status >= 500) {
      last_error = "provider returned HTTP " + std::to_string(res->status);
      log::warn("embedding provider attempt " + std::to_string(attempt + 1) + ": " + last_error);
      continue;
    }
    if (res->status != 200) {
      throw ServiceError("embedding provider returned HTTP " + std::to_string(res->status) + ": " +
                         res->body);
    }
    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception& e) {
      throw ServiceError(std::string("embedding provider sent invalid JSON: ") + e.what());
    }
    if (!reply.is_object() || !reply.contains("embeddings") || !reply["embeddings"].is_array()) {
      throw ServiceError("embedding provider reply lacks an \"embeddings\" array");
    }
    const auto& rows = reply["embeddings"];
    if (rows.size() != texts.size()) {
      throw ServiceError("embedding provider count mismatch: sent " + std::to_string(texts.size()) +
                         " texts, got " + std::to_string(rows.size()) + " embeddings");
    }
    std::size_t dim = provider.expected_dim;
    if (dim == 0 && !rows.empty()) dim = rows[0].size();
    Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != dim) {
        throw ServiceError("embedding provider dimension mismatch at row " + std::to_string(i) +
                           ": expected " + std::to_string(dim) + ", got " +
                           std::to_string(rows[i].is_array() ? rows[i].size() : 0));
      }
      for (std::size_t j = 0; j < dim; ++j) {
        if (!rows[i][j].is_number()) throw ServiceError("embedding provider sent a non-number");
        values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
      }
      ids.push_back("t" + std::to_string(i));
    }
    try {
      return EmbeddingSet(std::move(ids), std::move(values));
    } catch (const DataError& e) {
      throw ServiceError(std::string("embedding provider: ") + e.what());
    }
  }
  throw ServiceError("embedding provider unreachable after " + std::to_string(provider.retries + 1) +
                     " attempts: " + last_error);
}

EmbeddingFetcher provider_fetcher(ProviderConfig provider) {
  provider.validate();
  return [provider](const std::string& text) {
    const EmbeddingSet set = fetch_embeddings(provider, {text});
    const auto row = set.row(0);
    return std::vector<double>(row.data(), row.data() + row.size());
  };
}

json ScoreResult::to_json() const {
  return {{"ood_score", ood_score}, {"is_ood", is_ood}, {"threshold", threshold}};
}

ScoringService::ScoringService(ModelBundle bundle, EmbeddingFetcher fetcher)
    : bundle_(std::move(bundle)), fetcher_(std::move(fetcher)) {
  require_servable(bundle_);
  digest_ = bundle_digest(bundle_);
}

ScoreResult ScoringService::score(const json& request) const {
  if (!request.is_object()) throw UsageError("request body must be a JSON object");
  const int variants = static_cast<int>(request.contains("embedding")) +
                       static_cast<int>(request.contains("logprobs")) +
                       static_cast<int>(request.contains("text"));
  if (variants != 1) {
    throw UsageError("request must contain exactly one of \"embedding\", \"logprobs\", \"text\"");
  }
  double ood = 0.0;
  if (request.contains("logprobs")) {
    if (bundle_.method != ScoreMethod::ln) {
      throw DataError("this model scores embeddings; \"logprobs\" requires an ln model");
    }
    const std::vector<double> lp = numeric_array(request["logprobs"], "logprobs");
    ood = ood_value(score_ln(lp));
  } else {
    if (bundle_.method != ScoreMethod::density) {
      throw DataError("this model scores token log-probabilities; send \"logprobs\"");
    }
    std::vector<double> vec;
    if (request.contains("embedding")) {
      vec = numeric_array(request["embedding"], "embedding");
    } else {
      if (!request["text"].is_string()) throw UsageError("\"text\" must be a string");
      if (!fetcher_) throw DataError("no embedding provider configured; \"text\" requests are disabled");
      vec = fetcher_(request["text"].get<std::string>());
    }
    ood = density_score(bundle_, vec);
  }
  const Decision d = decide_score(ood, *bundle_.threshold);
  return {d.ood_score, d.is_ood, *bundle_.threshold};
}

json ScoringService::health() const { return {{"status", "ok"}, {"model_digest", digest_}}; }

json ScoringService::info() const {
  return {{"method", std::string(to_string(bundle_.method))},
          {"format_version", bundle_.format_version},
          {"threshold", *bundle_.threshold},
          {"config", bundle_.config},
          {"model_digest", digest_},
          {"text_requests", static_cast<bool>(fetcher_)},
          {"provenance",
           {{"seed", bundle_.provenance.seed},
            {"created_at", bundle_.provenance.created_at},
            {"tool_version", bundle_.provenance.tool_version}}},
          {"requests", requests()},
          {"failures", failures()}};
}

struct HttpServer::Impl {
  std::shared_ptr<const ScoringService> service;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const ScoringService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  // httplib also sets SO_REUSEPORT, which lets a second server share a busy
  // port silently.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  auto* svc = impl_->service.get();
  impl_->server.Post("/v1/score", [svc](const httplib::Request& req, httplib::Response& res) {
    svc->count_request();
    try {
      reply(res, 200, svc->score(json::parse(req.body)).to_json());
      return;
    } catch (const json::parse_error& e) {
      reply(res, 400, {{"error", std::string("invalid JSON: ") + e.what()}});
    } catch (const UsageError& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const ServiceError& e) {
      reply(res, 502, {{"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 422, {{"error", e.what()}});
    }
    svc->count_failure();
  });
  impl_->server.Get("/v1/health", [svc](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, svc->health());
  });
  impl_->server.Get("/v1/info", [svc](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, svc->info());
  });
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) throw ServiceError("cannot bind " + host + ":" + std::to_string(port));
}

void HttpServer::start(const std::string& host, int port) {
  bind(host, port);
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::run(const std::string& host, int port) {
  bind(host, port);
  log::info("serving on " + host + ":" + std::to_string(port_));
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::pair<std::string, int> parse_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0) throw UsageError("bind must be host:port, got " + bind);
  int port = -1;
  try {
    std::size_t used = 0;
    port = std::stoi(bind.substr(colon + 1), &used);
    if (used != bind.size() - colon - 1) port = -1;
  } catch (const std::exception&) {
    port = -1;
  }
  if (port < 0 || port > 65535) throw UsageError("invalid port in bind address " + bind);
  return {bind.substr(0, colon), port};
}

}  // namespace oodkit::service
