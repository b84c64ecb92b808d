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

#include <cmath>
#include <map>

#include "oodkit/error.hpp"
#include "oodkit/likelihood.hpp"
#include "oodkit/random.hpp"

namespace oodkit {

SubstitutionDistribution substitution_distribution(const Corpus& corpus) {
  std::map<std::string, std::size_t> freq;
  for (const auto& sentence : corpus) {
    for (const auto& t : sentence) ++freq[t];
  }
  if (freq.empty()) throw DataError("cannot derive a vocabulary from an empty corpus");
  SubstitutionDistribution dist;
  double norm = 0.0;
  for (const auto& [token, f] : freq) {
    dist.tokens.push_back(token);
    dist.probabilities.push_back(std::sqrt(static_cast<double>(f)));
    norm += dist.probabilities.back();
  }
  double running = 0.0;
  for (auto& p : dist.probabilities) {
    p /= norm;
    running += p;
    dist.cumulative.push_back(running);
  }
  return dist;
}

NoisyCorpus make_noisy_corpus(const Corpus& corpus, const NoiseConfig& cfg) {
  if (!(cfg.p_noise >= 0.0 && cfg.p_noise <= 1.0)) {
    throw UsageError("p_noise must lie in [0, 1]");
  }
  const auto dist = substitution_distribution(corpus);
  Rng rng(cfg.seed);
  NoisyCorpus out;
  out.corpus.reserve(corpus.size());
  for (const auto& sentence : corpus) {
    Tokens noisy;
    noisy.reserve(sentence.size());
    for (const auto& t : sentence) {
      ++out.n_tokens;
      if (rng.bernoulli(cfg.p_noise)) {
        ++out.n_selected;
        const auto& replacement = dist.tokens[rng.categorical(dist.cumulative)];
        ++out.replacement_counts[replacement];
        noisy.push_back(replacement);
      } else {
        noisy.push_back(t);
      }
    }
    out.corpus.push_back(std::move(noisy));
  }
  return out;
}

}  // namespace oodkit
