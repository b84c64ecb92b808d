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

#include <nlohmann/json.hpp>
#include <span>
#include <vector>

#include "oodkit/bundle.hpp"
#include "oodkit/dataset.hpp"
#include "oodkit/embeddings.hpp"
#include "oodkit/gmm.hpp"
#include "oodkit/likelihood.hpp"
#include "oodkit/metrics.hpp"
#include "oodkit/sweep.hpp"
#include "oodkit/trainer.hpp"

namespace oodkit {

struct DensityPipelineConfig {
  bool train_encoder = true;  // false: GMM directly on the base embeddings
  TrainConfig train;
  GmmOptions gmm;
  double id_fpr_budget = 0.05;
};

nlohmann::json to_json(const DensityPipelineConfig& cfg);

struct PipelineOutput {
  ModelBundle bundle;
  std::vector<OODScore> scores;  // every valid and test record
  EvalReport test_report;
};

// Train (unlabelled ID train records only) -> embed -> fit GMM -> calibrate
// the threshold on ID validation scores -> score valid/test -> evaluate test.
// `dataset` must already carry is_ood flags on its valid/test records.
PipelineOutput run_density_pipeline(const Dataset& dataset, const EmbeddingSet& base,
                                    const DensityPipelineConfig& cfg);

// -log density of one base embedding, after the bundle's encoder if it has
// one. Batch scoring and the service both go through this, so their results
// agree bit for bit.
double density_score(const ModelBundle& bundle, std::span<const double> base_vec);

std::vector<OODScore> density_scores(const ModelBundle& bundle, const EmbeddingSet& base);

// Sweep evaluator: trains with (k, gamma) substituted and evaluates on the
// validation split.
SweepEvaluator validation_evaluator(const Dataset& dataset, const EmbeddingSet& base,
                                    DensityPipelineConfig cfg);

}  // namespace oodkit
