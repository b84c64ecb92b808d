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

#include "oodkit/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "oodkit/error.hpp"

namespace oodkit {

NGramLM NGramLM::train(const std::vector<std::vector<std::string>>& corpus, int order,
                       double smoothing_k) {
  if (order < 1) throw UsageError("n-gram order must be >= 1");
  if (!(smoothing_k > 0.0) || !std::isfinite(smoothing_k)) {
    throw UsageError("smoothing constant k must be positive");
  }
  std::set<std::string> vocab;
  std::size_t n_tokens = 0;
  for (const auto& sentence : corpus) {
    for (const auto& t : sentence) vocab.insert(t);
    n_tokens += sentence.size();
  }
  if (n_tokens == 0) throw DataError("cannot train an n-gram LM on an empty corpus");

  NGramLM lm;
  lm.order_ = order;
  lm.k_ = smoothing_k;
  lm.vocab_.assign(vocab.begin(), vocab.end());
  for (std::size_t i = 0; i < lm.vocab_.size(); ++i) lm.ids_.emplace(lm.vocab_[i], i);
  lm.freq_.assign(lm.vocab_.size(), 0);

  for (const auto& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const TokenId id = lm.id_of(sentence[i]);
      ++lm.freq_[id];
      auto& ctx = lm.contexts_[lm.context_key(std::span(sentence).first(i))];
      ++ctx.total;
      ++ctx.next[id];
    }
  }
  return lm;
}

std::size_t NGramLM::frequency(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? 0 : freq_[it->second];
}

NGramLM::TokenId NGramLM::id_of(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? vocab_.size() : it->second;
}

std::string NGramLM::context_key(std::span<const std::string> history) const {
  // Ids joined by a separator; the begin marker and unknown get their own
  // ids past the vocabulary.
  const std::size_t width = static_cast<std::size_t>(order_ - 1);
  std::string key;
  for (std::size_t j = 0; j < width; ++j) {
    const std::size_t back = width - j;  // position history.size() - back
    std::size_t id = vocab_.size() + 1;  // begin marker
    if (back <= history.size()) id = id_of(history[history.size() - back]);
    key += std::to_string(id);
    key += ',';
  }
  return key;
}

double NGramLM::probability(std::span<const std::string> history, std::string_view token) const {
  const double support = static_cast<double>(support_size());
  const auto it = contexts_.find(context_key(history));
  if (it == contexts_.end()) return 1.0 / support;
  const auto& ctx = it->second;
  std::size_t count = 0;
  if (const auto n = ctx.next.find(id_of(token)); n != ctx.next.end()) count = n->second;
  return (static_cast<double>(count) + k_) / (static_cast<double>(ctx.total) + k_ * support);
}

std::vector<double> NGramLM::logprobs(std::span<const std::string> tokens) const {
  std::vector<double> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.push_back(std::log(probability(tokens.first(i), tokens[i])));
  }
  return out;
}

std::vector<double> uniform_logprobs(std::size_t support_size, std::size_t length) {
  if (support_size == 0) throw UsageError("uniform LM needs a nonempty support");
  return std::vector<double>(length, -std::log(static_cast<double>(support_size)));
}

}  // namespace oodkit
