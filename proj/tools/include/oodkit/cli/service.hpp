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

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "oodkit/bundle.hpp"
#include "oodkit/embeddings.hpp"

namespace oodkit::service {

struct ProviderConfig {
  std::string url;  // http://host:port[/path]; the path defaults to /embed
  int timeout_ms = 2000;
  int retries = 2;
  std::size_t expected_dim = 0;  // 0: take whatever the provider returns
  int backoff_ms = 100;          // doubled after every failed attempt

  void validate() const;
};

// POST {"texts": [...]} -> {"embeddings": [[...], ...]}. Transport failures
// and 5xx responses are retried with exponential backoff; any other failure
// is final. Rows are keyed "t0", "t1", ... in request order.
EmbeddingSet fetch_embeddings(const ProviderConfig& provider, const std::vector<std::string>& texts);

using EmbeddingFetcher = std::function<std::vector<double>(const std::string& text)>;

struct ScoreResult {
  double ood_score = 0.0;
  bool is_ood = false;
  double threshold = 0.0;

  nlohmann::json to_json() const;
};

// Request handling without the transport. The model snapshot is immutable;
// the only shared mutable state is the atomic counters.
class ScoringService {
 public:
  // Throws DataError unless the bundle is servable.
  explicit ScoringService(ModelBundle bundle, EmbeddingFetcher fetcher = nullptr);

  // Exactly one of "embedding", "logprobs", "text". Throws UsageError for a
  // malformed request, DataError when the request does not fit the model and
  // ServiceError when the provider fails.
  ScoreResult score(const nlohmann::json& request) const;

  nlohmann::json health() const;
  nlohmann::json info() const;

  const ModelBundle& bundle() const { return bundle_; }
  const std::string& digest() const { return digest_; }
  std::uint64_t requests() const { return requests_.load(); }
  std::uint64_t failures() const { return failures_.load(); }

  // Counter updates used by the HTTP layer.
  void count_request() const { requests_.fetch_add(1); }
  void count_failure() const { failures_.fetch_add(1); }

 private:
  ModelBundle bundle_;
  std::string digest_;
  EmbeddingFetcher fetcher_;
  mutable std::atomic<std::uint64_t> requests_{0};
  mutable std::atomic<std::uint64_t> failures_{0};
};

EmbeddingFetcher provider_fetcher(ProviderConfig provider);

// HTTP/1.1 front end: POST /v1/score, GET /v1/health, GET /v1/info.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const ScoringService> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Throws ServiceError when the address cannot be bound.
  void start(const std::string& host, int port);
  // Binds and serves on the calling thread until stop() is called.
  void run(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

 private:
  void bind(const std::string& host, int port);

  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

// "host:port" -> pair. Throws UsageError.
std::pair<std::string, int> parse_bind(const std::string& bind);

}  // namespace oodkit::service
