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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oodkit/dataset.hpp"
#include "oodkit/ngram.hpp"

namespace oodkit {

// Uniform OOD score: higher means more likely out-of-domain.
struct OODScore {
  std::string id;
  double value = 0.0;

  bool operator==(const OODScore&) const = default;
};

// Likelihood scores in the log domain (natural log).
struct LikelihoodScore {
  std::string id;
  double log_ln = 0.0;
  std::optional<double> log_lr;
  std::optional<double> log_nlr;
  std::size_t length = 0;
};

// Mean token log-probability, i.e. log of the length-normalised likelihood.
// Throws DataError on an empty stream or an entry that is positive or not
// finite.
double score_ln(std::span<const double> logprobs);

// Sum(in-domain) - Sum(background). Streams must share a tokenisation and
// length.
double score_lr(std::span<const double> logprobs_id, std::span<const double> logprobs_bg);

// Mean(in-domain) - Mean(background).
double score_nlr(std::span<const double> logprobs_id, std::span<const double> logprobs_bg);

enum class LikelihoodMethod { ln, lr, nlr, lr_ws };
std::string_view to_string(LikelihoodMethod method);
LikelihoodMethod parse_likelihood_method(std::string_view text);

// The OOD orientation for a likelihood value (negation, applied once here).
inline double ood_value(double log_likelihood) { return -log_likelihood; }

struct NoiseConfig {
  double p_noise = 0.5;
  std::uint64_t seed = 0;
};

using Tokens = std::vector<std::string>;
using Corpus = std::vector<Tokens>;

// Vocabulary sorted lexicographically with probability sqrt(f)/sum(sqrt(f)).
struct SubstitutionDistribution {
  std::vector<std::string> tokens;
  std::vector<double> probabilities;
  std::vector<double> cumulative;
};

SubstitutionDistribution substitution_distribution(const Corpus& corpus);

struct NoisyCorpus {
  Corpus corpus;
  std::size_t n_tokens = 0;
  std::size_t n_selected = 0;  // positions picked for substitution
  // How often each replacement token was drawn over selected positions.
  std::map<std::string, std::size_t> replacement_counts;
};

// Each token is independently selected with probability p_noise and replaced
// by a draw from the sqrt-frequency law (which may return the same token).
// Sequence lengths are preserved. Throws DataError on an empty corpus and
// UsageError when p_noise is outside [0, 1].
NoisyCorpus make_noisy_corpus(const Corpus& corpus, const NoiseConfig& cfg);

struct LmParams {
  int order = 2;
  double smoothing_k = 1.0;
};

// LR with a background LM trained on a word-substitution-noised copy of the
// train split. Emits one score per valid/test record (value = -log LR).
std::vector<OODScore> score_lr_ws(const Dataset& dataset, const NoiseConfig& cfg,
                                  const LmParams& lm_params);

Corpus tokenize_split(const Dataset& dataset, Split split);

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Pearson correlation between scores and lengths with a two-sided p-value
// from the Student-t distribution on n - 2 degrees of freedom. Throws
// DataError when n < 3, sizes differ, or either side has zero variance.
CorrelationResult length_correlation(std::span<const double> values,
                                     std::span<const double> lengths);

}  // namespace oodkit
