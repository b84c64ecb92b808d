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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace oodkit {

// Add-k smoothed n-gram language model over whitespace tokens.
//
// Predictions range over the training vocabulary plus an unknown symbol;
// contexts are the previous order-1 tokens, left-padded with a begin marker.
// Unknown tokens in a context map to the unknown symbol. Unseen contexts
// predict uniformly.
class NGramLM {
 public:
  static constexpr std::string_view kUnknown = "<unk>";
  static constexpr std::string_view kBegin = "<s>";

  // Throws DataError on an empty corpus, UsageError on order < 1 or k <= 0.
  static NGramLM train(const std::vector<std::vector<std::string>>& corpus, int order,
                       double smoothing_k);

  int order() const { return order_; }
  double smoothing_k() const { return k_; }

  // Training vocabulary (without the unknown symbol), sorted.
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  // Size of the prediction space, vocabulary plus unknown.
  std::size_t support_size() const { return vocab_.size() + 1; }
  std::size_t frequency(std::string_view token) const;

  // P(token | context); the context is the full history, only its last
  // order-1 entries are used.
  double probability(std::span<const std::string> history, std::string_view token) const;

  // Natural-log probability of every token given its history.
  std::vector<double> logprobs(std::span<const std::string> tokens) const;

 private:
  using TokenId = std::size_t;
  struct ContextCounts {
    std::size_t total = 0;
    std::unordered_map<TokenId, std::size_t> next;
  };

  TokenId id_of(std::string_view token) const;
  std::string context_key(std::span<const std::string> history) const;

  int order_ = 1;
  double k_ = 1.0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<std::size_t> freq_;
  std::unordered_map<std::string, ContextCounts> contexts_;
};

// Per-token log-probabilities of a uniform LM over `support_size` symbols.
std::vector<double> uniform_logprobs(std::size_t support_size, std::size_t length);

}  // namespace oodkit
