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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "frozen_values.hpp"
#include "oodkit/dataset.hpp"
#include "oodkit/error.hpp"
#include "oodkit/likelihood.hpp"
#include "oodkit/ngram.hpp"
#include "oodkit/random.hpp"
#include "test_util.hpp"

namespace oodkit {
namespace {

using testing::expect_error;
using V = std::vector<double>;

const double kHalf = std::log(0.5);

TEST(ScoreLn, Examples) {
  EXPECT_NEAR(score_ln(V{kHalf, kHalf, kHalf}), kHalf, 1e-15);
  EXPECT_NEAR(score_ln(V{kHalf, std::log(0.25)}), frozen::kScoreLnHalfQuarter, 1e-12);
  EXPECT_NEAR(std::exp(score_ln(V{kHalf, std::log(0.25)})), frozen::kLnGeometric, 1e-12);
  expect_error<DataError>([] { score_ln(V{}); }, "empty");
  EXPECT_THROW(score_ln(V{0.1}), DataError);
  EXPECT_THROW(score_ln(V{std::numeric_limits<double>::quiet_NaN()}), DataError);
  EXPECT_THROW(score_ln(V{-std::numeric_limits<double>::infinity()}), DataError);
}

TEST(ScoreLr, Examples) {
  EXPECT_EQ(score_lr(V{-1, -2}, V{-1, -2}), 0.0);
  EXPECT_DOUBLE_EQ(score_lr(V{-1, -2}, V{-2, -3}), 2.0);
  EXPECT_THROW(score_lr(V{-1, -1, -1, -1}, V{-1, -1, -1, -1, -1}), DataError);
}

TEST(ScoreNlr, Examples) {
  EXPECT_EQ(score_nlr(V{-0.3, -2}, V{-0.3, -2}), 0.0);
  EXPECT_DOUBLE_EQ(score_nlr(V{-1, -1}, V{-2, -2}), 1.0);
  EXPECT_THROW(score_nlr(V{}, V{}), DataError);
}

TEST(ScoreLn, ConstantSequenceEqualsThatProbability) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const double p = rng.uniform(1e-6, 1.0);
    const V s(1 + rng.below(30), std::log(p));
    EXPECT_NEAR(std::exp(score_ln(s)), p, 1e-12 * p);
  }
}

TEST(Likelihood, Identities) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(20);
    V id(n), bg(n);
    for (std::size_t i = 0; i < n; ++i) {
      id[i] = -rng.uniform(0.0, 8.0);
      bg[i] = -rng.uniform(0.0, 8.0);
    }
    EXPECT_EQ(score_lr(id, id), 0.0);
    EXPECT_EQ(score_nlr(id, id), 0.0);
    // NLR is the difference of the two LN values.
    EXPECT_NEAR(score_nlr(id, bg), score_ln(id) - score_ln(bg), 1e-12);
    // Orientation: raising every in-domain log-prob lowers every OOD value.
    V up = id;
    for (double& v : up) v = std::min(0.0, v + 0.1);
    if (up != id) {
      EXPECT_LT(ood_value(score_ln(up)), ood_value(score_ln(id)));
      EXPECT_LT(ood_value(score_lr(up, bg)), ood_value(score_lr(id, bg)));
      EXPECT_LT(ood_value(score_nlr(up, bg)), ood_value(score_nlr(id, bg)));
    }
  }
}

TEST(Likelihood, UniformBackgroundNlrIsShiftedLn) {
  Rng rng(10);
  const std::size_t support = 37;
  std::vector<double> ln;
  std::vector<double> nlr;
  for (int t = 0; t < 300; ++t) {
    V id(1 + rng.below(15));
    for (double& v : id) v = -rng.uniform(0.0, 6.0);
    const V bg = uniform_logprobs(support, id.size());
    ln.push_back(score_ln(id));
    nlr.push_back(score_nlr(id, bg));
    EXPECT_NEAR(nlr.back(), ln.back() + std::log(static_cast<double>(support)), 1e-12);
  }
  // identical ordering, i.e. rank correlation exactly 1
  std::vector<std::size_t> a(ln.size()), b(ln.size());
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  std::stable_sort(a.begin(), a.end(), [&](auto i, auto j) { return ln[i] < ln[j]; });
  std::stable_sort(b.begin(), b.end(), [&](auto i, auto j) { return nlr[i] < nlr[j]; });
  EXPECT_EQ(a, b);
}

TEST(Likelihood, MethodNames) {
  for (auto m : {LikelihoodMethod::ln, LikelihoodMethod::lr, LikelihoodMethod::nlr,
                 LikelihoodMethod::lr_ws}) {
    EXPECT_EQ(parse_likelihood_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_likelihood_method("ppl"), UsageError);
}

Corpus corpus_of(std::initializer_list<const char*> lines) {
  Corpus c;
  for (const char* l : lines) c.push_back(whitespace_tokens(l));
  return c;
}

TEST(Noise, SqrtFrequencyLaw) {
  const auto dist = substitution_distribution(corpus_of({"a a a a b"}));
  ASSERT_EQ(dist.tokens, (std::vector<std::string>{"a", "b"}));
  EXPECT_NEAR(dist.probabilities[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(dist.probabilities[1], 1.0 / 3.0, 1e-15);
}

TEST(Noise, ZeroAndFullRates) {
  const Corpus c = corpus_of({"the cat sat", "on the mat", "the end"});
  const auto none = make_noisy_corpus(c, {0.0, 1});
  EXPECT_EQ(none.corpus, c);
  EXPECT_EQ(none.n_selected, 0u);
  const auto all = make_noisy_corpus(c, {1.0, 1});
  EXPECT_EQ(all.n_selected, all.n_tokens);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(all.corpus[i].size(), c[i].size());
  EXPECT_THROW(make_noisy_corpus(c, {1.5, 1}), UsageError);
  EXPECT_THROW(make_noisy_corpus({}, {0.5, 1}), DataError);
}

TEST(Noise, SameTokenRateMatchesSelfMass) {
  // with p_noise = 1 a position keeps its token only by drawing it again
  Corpus c;
  for (int i = 0; i < 4000; ++i) c.push_back(whitespace_tokens("a a a a b"));
  const auto dist = substitution_distribution(c);
  const auto noisy = make_noisy_corpus(c, {1.0, 3});
  double expected = 0.0;
  std::size_t kept = 0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    for (std::size_t i = 0; i < c[s].size(); ++i) {
      kept += noisy.corpus[s][i] == c[s][i];
      expected += c[s][i] == "a" ? dist.probabilities[0] : dist.probabilities[1];
    }
  }
  const double n = static_cast<double>(noisy.n_tokens);
  EXPECT_NEAR(static_cast<double>(kept) / n, expected / n, 0.01);
}

TEST(NGram, AddKExamples) {
  const Corpus c = corpus_of({"a a b"});
  const auto lm1 = NGramLM::train(c, 1, 1.0);
  EXPECT_EQ(lm1.support_size(), 3u);
  EXPECT_DOUBLE_EQ(lm1.probability({}, "a"), 0.5);
  const auto lm0 = NGramLM::train(c, 1, 1e-9);
  EXPECT_NEAR(lm0.probability({}, "a"), 2.0 / 3.0, 1e-8);
  EXPECT_EQ(lm0.frequency("a"), 2u);
  EXPECT_THROW(NGramLM::train(c, 0, 1.0), UsageError);
  EXPECT_THROW(NGramLM::train(c, 1, 0.0), UsageError);
  EXPECT_THROW(NGramLM::train({}, 1, 1.0), DataError);
}

TEST(NGram, DistributionsNormalise) {
  const Corpus c = corpus_of({"the cat sat on the mat", "the dog sat", "a cat ran"});
  for (int order : {1, 2, 3}) {
    const auto lm = NGramLM::train(c, order, 0.5);
    std::vector<std::vector<std::string>> histories = {{}, {"the"}, {"the", "cat"}, {"zebra"},
                                                       {"sat", "on"}};
    for (const auto& h : histories) {
      double total = lm.probability(h, NGramLM::kUnknown);
      for (const auto& w : lm.vocabulary()) total += lm.probability(h, w);
      EXPECT_NEAR(total, 1.0, 1e-12) << "order " << order;
    }
  }
}

TEST(NGram, UnknownTokensStayFinite) {
  const auto lm = NGramLM::train(corpus_of({"a b c"}), 2, 1.0);
  for (double lp : lm.logprobs(whitespace_tokens("zz yy"))) {
    EXPECT_TRUE(std::isfinite(lp));
    EXPECT_LT(lp, 0.0);
  }
}

Dataset tiny_text_dataset() {
  std::vector<Record> r;
  const char* train[] = {"play some jazz music", "play the radio", "play a song by queen",
                         "turn the music up", "skip this song"};
  int i = 0;
  for (const char* t : train) r.push_back({"tr" + std::to_string(i++), t, "m", Split::train, {}});
  r.push_back({"v0", "play jazz", "m", Split::valid, false});
  r.push_back({"t0", "play some music", "m", Split::test, false});
  r.push_back({"t1", "book a flight to rome", "f", Split::test, true});
  r.push_back({"t2", "qq zz", "f", Split::test, true});
  return Dataset(std::move(r));
}

TEST(LrWs, ZeroNoiseGivesZeroScores) {
  const auto scores = score_lr_ws(tiny_text_dataset(), {0.0, 4}, {2, 1.0});
  ASSERT_EQ(scores.size(), 4u);
  for (const auto& s : scores) EXPECT_EQ(s.value, 0.0) << s.id;
}

TEST(LrWs, ScoresEveryEvaluationRecord) {
  const auto scores = score_lr_ws(tiny_text_dataset(), {0.5, 4}, {2, 1.0});
  ASSERT_EQ(scores.size(), 4u);
  EXPECT_EQ(scores[0].id, "v0");
  for (const auto& s : scores) EXPECT_TRUE(std::isfinite(s.value));
}

TEST(Correlation, Examples) {
  const auto affine = length_correlation(V{1, 2, 3, 4}, V{3, 5, 7, 9});
  EXPECT_NEAR(affine.r, 1.0, 1e-15);
  EXPECT_NEAR(affine.p_value, 0.0, 1e-12);
  const auto half = length_correlation(V{1, 2, 3}, V{1, 3, 2});
  EXPECT_NEAR(half.r, frozen::kPearson123132, 1e-15);
  // t = r sqrt(n-2)/sqrt(1-r^2) = 1/sqrt(3) on 1 df: p = 1 - 2 atan(t)/pi = 2/3
  EXPECT_NEAR(half.p_value, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(half.n, 3u);
  expect_error<DataError>([] { length_correlation(V{1, 2, 3}, V{2, 2, 2}); }, "variance");
  EXPECT_THROW(length_correlation(V{1, 2}, V{1, 2}), DataError);
  EXPECT_THROW(length_correlation(V{1, 2, 3}, V{1, 2}), DataError);
}

}  // namespace
}  // namespace oodkit
