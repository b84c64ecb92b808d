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

#include "oodkit/pipeline.hpp"

#include "oodkit/error.hpp"
#include "oodkit/log.hpp"
#include "oodkit/random.hpp"
#include "oodkit/version.hpp"

namespace oodkit {

using nlohmann::json;

json to_json(const DensityPipelineConfig& cfg) {
  const TrainConfig& t = cfg.train;
  json j = {{"train_encoder", cfg.train_encoder},
            {"components", cfg.gmm.components},
            {"eps", cfg.gmm.variance_floor},
            {"gmm_max_iters", cfg.gmm.max_iters},
            {"gmm_tol", cfg.gmm.tol},
            {"id_fpr_budget", cfg.id_fpr_budget},
            {"seed", t.seed}};
  if (cfg.train_encoder) {
    j.update({{"k", t.k},
              {"gamma", t.gamma},
              {"tau", t.tau},
              {"alpha", t.alpha},
              {"batch", t.batch_size},
              {"epochs", t.epochs},
              {"lr", t.learning_rate},
              {"optimizer", std::string(to_string(t.optimizer))},
              {"cluster_loss", t.cluster_loss_on},
              {"cl_loss", t.cl_loss_on},
              {"dropout", t.dropout}});
  }
  return j;
}

namespace {

std::vector<std::string> ids_in(const Dataset& dataset, Split split) {
  std::vector<std::string> ids;
  for (const Record* r : dataset.in_split(split)) ids.push_back(r->id);
  return ids;
}

std::vector<std::string> eval_ids(const Dataset& dataset) {
  std::vector<std::string> ids;
  for (const Record& r : dataset.records()) {
    if (r.split != Split::train) ids.push_back(r.id);
  }
  return ids;
}

std::vector<double> id_scores_in(const Dataset& dataset, const std::vector<OODScore>& scores,
                                 Split split) {
  std::vector<double> out;
  for (const OODScore& s : scores) {
    const Record* r = dataset.find(s.id);
    if (r && r->split == split && r->is_ood == false) out.push_back(s.value);
  }
  return out;
}

}  // namespace

double density_score(const ModelBundle& bundle, std::span<const double> base_vec) {
  if (!bundle.gmm) throw DataError("model bundle has no fitted density");
  const std::size_t expected = bundle.encoder ? bundle.encoder->base_dim() : bundle.gmm->dim();
  if (base_vec.size() != expected) {
    throw DataError("embedding dimension " + std::to_string(base_vec.size()) +
                    " does not match the model (" + std::to_string(expected) + ")");
  }
  if (!bundle.encoder) return ood_value(log_density(*bundle.gmm, base_vec));
  const Matrix in = Eigen::Map<const RowVector>(base_vec.data(), static_cast<Eigen::Index>(base_vec.size()));
  const Matrix e = embed(*bundle.encoder, in);
  return ood_value(log_density(*bundle.gmm, std::span<const double>(e.data(), static_cast<std::size_t>(e.cols()))));
}

std::vector<OODScore> density_scores(const ModelBundle& bundle, const EmbeddingSet& base) {
  std::vector<OODScore> out;
  out.reserve(base.size());
  const Matrix& values = base.values();
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto row = values.row(static_cast<Eigen::Index>(i));
    out.push_back({base.ids()[i], density_score(bundle, std::span<const double>(row.data(), base.dim()))});
  }
  return out;
}

PipelineOutput run_density_pipeline(const Dataset& dataset, const EmbeddingSet& base,
                                    const DensityPipelineConfig& cfg) {
  const Dataset train_view = training_view(dataset);
  if (train_view.empty()) throw DataError("dataset has no train records");
  const Matrix train_base = base.gather(train_view.ids());

  PipelineOutput out;
  ModelBundle& bundle = out.bundle;
  bundle.method = ScoreMethod::density;
  bundle.config = to_json(cfg);
  bundle.provenance = {cfg.train.seed, utc_timestamp(), std::string(kVersion)};

  Matrix train_points = train_base;
  if (cfg.train_encoder) {
    bundle.encoder = train(train_base, cfg.train);
    train_points = embed(*bundle.encoder, train_base);
  }
  GmmOptions gmm_opts = cfg.gmm;
  gmm_opts.seed = derive_seed(cfg.train.seed, 4);
  bundle.gmm = fit_gmm(train_points, gmm_opts);

  const std::vector<std::string> ids = eval_ids(dataset);
  out.scores = density_scores(bundle, base.subset(ids));

  std::vector<double> calib = id_scores_in(dataset, out.scores, Split::valid);
  if (calib.empty()) {
    log::warn("no in-domain validation records; calibrating the threshold on train scores");
    const Vector ld = log_density(*bundle.gmm, train_points);
    for (Eigen::Index i = 0; i < ld.size(); ++i) calib.push_back(ood_value(ld(i)));
  }
  bundle.threshold = calibrate_threshold(calib, cfg.id_fpr_budget);

  out.test_report = evaluate(scored_set(dataset, out.scores, Split::test), bundle.config);
  return out;
}

SweepEvaluator validation_evaluator(const Dataset& dataset, const EmbeddingSet& base,
                                    DensityPipelineConfig cfg) {
  return [&dataset, &base, cfg](int k, double gamma) {
    DensityPipelineConfig c = cfg;
    c.train.k = k;
    c.train.gamma = gamma;
    const Dataset train_view = training_view(dataset);
    const Matrix train_base = base.gather(train_view.ids());
    ModelBundle bundle;
    bundle.encoder = train(train_base, c.train);
    GmmOptions gmm_opts = c.gmm;
    gmm_opts.seed = derive_seed(c.train.seed, 4);
    bundle.gmm = fit_gmm(embed(*bundle.encoder, train_base), gmm_opts);
    const auto scores = density_scores(bundle, base.subset(ids_in(dataset, Split::valid)));
    return evaluate(scored_set(dataset, scores, Split::valid), to_json(c));
  };
}

}  // namespace oodkit
