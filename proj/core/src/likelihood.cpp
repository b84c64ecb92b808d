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
#include <numeric>
#include <string>

#include "oodkit/error.hpp"
#include "oodkit/likelihood.hpp"

namespace oodkit {
namespace {

void check_stream(std::span<const double> logprobs, const char* which) {
  if (logprobs.empty()) throw DataError(std::string(which) + " log-prob stream is empty");
  for (const double x : logprobs) {
    if (!std::isfinite(x) || x > 0.0) {
      throw DataError(std::string(which) + " log-prob stream has an entry that is positive or not finite");
    }
  }
}

void check_pair(std::span<const double> id, std::span<const double> bg) {
  check_stream(id, "in-domain");
  check_stream(bg, "background");
  if (id.size() != bg.size()) {
    throw DataError("in-domain and background streams differ in length (" +
                    std::to_string(id.size()) + " vs " + std::to_string(bg.size()) + ")");
  }
}

double sum(std::span<const double> xs) { return std::accumulate(xs.begin(), xs.end(), 0.0); }

}  // namespace

double score_ln(std::span<const double> logprobs) {
  check_stream(logprobs, "in-domain");
  return sum(logprobs) / static_cast<double>(logprobs.size());
}

double score_lr(std::span<const double> logprobs_id, std::span<const double> logprobs_bg) {
  check_pair(logprobs_id, logprobs_bg);
  return sum(logprobs_id) - sum(logprobs_bg);
}

double score_nlr(std::span<const double> logprobs_id, std::span<const double> logprobs_bg) {
  check_pair(logprobs_id, logprobs_bg);
  const auto n = static_cast<double>(logprobs_id.size());
  return sum(logprobs_id) / n - sum(logprobs_bg) / n;
}

std::string_view to_string(LikelihoodMethod method) {
  switch (method) {
    case LikelihoodMethod::ln: return "ln";
    case LikelihoodMethod::lr: return "lr";
    case LikelihoodMethod::nlr: return "nlr";
    case LikelihoodMethod::lr_ws: return "lr-ws";
  }
  return "ln";
}

LikelihoodMethod parse_likelihood_method(std::string_view text) {
  if (text == "ln") return LikelihoodMethod::ln;
  if (text == "lr") return LikelihoodMethod::lr;
  if (text == "nlr") return LikelihoodMethod::nlr;
  if (text == "lr-ws" || text == "lr_ws") return LikelihoodMethod::lr_ws;
  throw UsageError("unknown likelihood method \"" + std::string(text) + "\"");
}

Corpus tokenize_split(const Dataset& dataset, Split split) {
  Corpus out;
  for (const auto* r : dataset.in_split(split)) out.push_back(whitespace_tokens(r->text));
  return out;
}

std::vector<OODScore> score_lr_ws(const Dataset& dataset, const NoiseConfig& cfg,
                                  const LmParams& lm_params) {
  const Corpus train = tokenize_split(dataset, Split::train);
  if (train.empty()) throw DataError("LR_ws needs a nonempty train split");
  const auto in_domain = NGramLM::train(train, lm_params.order, lm_params.smoothing_k);
  const auto background =
      NGramLM::train(make_noisy_corpus(train, cfg).corpus, lm_params.order, lm_params.smoothing_k);

  std::vector<OODScore> scores;
  for (const auto& r : dataset.records()) {
    if (r.split == Split::train) continue;
    const auto tokens = whitespace_tokens(r.text);
    if (tokens.empty()) throw DataError("record \"" + r.id + "\" has no tokens");
    scores.push_back({r.id, ood_value(score_lr(in_domain.logprobs(tokens),
                                               background.logprobs(tokens)))});
  }
  return scores;
}

}  // namespace oodkit
