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
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "oodkit/dataset.hpp"
#include "oodkit/likelihood.hpp"

namespace oodkit {

// OOD is the positive class throughout; higher score means more OOD.
struct ScoredSet {
  std::vector<double> ood_scores;
  std::vector<double> id_scores;
};

// Joins scores with the dataset's is_ood flags. Records without a flag are
// skipped; a flagged record with no score is a DataError.
ScoredSet scored_set(const Dataset& dataset, const std::vector<OODScore>& scores,
                     std::optional<Split> only_split = std::nullopt);

// P(OOD score > ID score) with ties counted 1/2, via midranks.
double auroc(const ScoredSet& s);

// Average precision with tied scores processed as one threshold group.
double aupr_ood(const ScoredSet& s);

// FPR at the largest observed threshold theta whose TPR (score >= theta)
// reaches `level`.
double fpr_at_tpr(const ScoredSet& s, double level = 0.95);

// Nearest-rank (1 - id_fpr_budget) quantile of in-domain scores.
double calibrate_threshold(std::span<const double> id_scores, double id_fpr_budget = 0.05);

struct EvalReport {
  double auroc = 0.0;
  double aupr_ood = 0.0;
  double fpr_at_95tpr = 0.0;
  std::size_t n_id = 0;
  std::size_t n_ood = 0;
  nlohmann::json config = nlohmann::json::object();

  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
};

EvalReport evaluate(const ScoredSet& s, nlohmann::json config = nlohmann::json::object());

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct SummaryReport {
  std::vector<EvalReport> splits;
  MetricSummary auroc;
  MetricSummary aupr_ood;
  MetricSummary fpr_at_95tpr;

  nlohmann::json to_json() const;
};

// Throws DataError on an empty list or when the reports' config key sets
// differ.
SummaryReport aggregate_splits(const std::vector<EvalReport>& reports);

// Flat CSV (one row per split plus mean/std rows).
std::string summary_csv(const SummaryReport& summary);

}  // namespace oodkit
