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

#include "oodkit/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "oodkit/alignment.hpp"
#include "oodkit/bundle.hpp"
#include "oodkit/cli/artifacts.hpp"
#include "oodkit/cli/config.hpp"
#include "oodkit/cli/manifest.hpp"
#include "oodkit/cli/service.hpp"
#include "oodkit/dataset.hpp"
#include "oodkit/embeddings.hpp"
#include "oodkit/error.hpp"
#include "oodkit/likelihood.hpp"
#include "oodkit/log.hpp"
#include "oodkit/logprobs.hpp"
#include "oodkit/metrics.hpp"
#include "oodkit/ngram.hpp"
#include "oodkit/pca.hpp"
#include "oodkit/pipeline.hpp"
#include "oodkit/splits.hpp"
#include "oodkit/sweep.hpp"
#include "oodkit/version.hpp"

namespace oodkit::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Flag tables

struct FlagSpec {
  std::string names;  // CLI11 name list, e.g. "--in,--dataset"
  std::string key;    // RunConfig member
  std::string help;
  std::optional<bool> sets = std::nullopt;  // switch assigning a fixed bool
};

const std::vector<FlagSpec>& common_flags() {
  static const std::vector<FlagSpec> flags = {
      {"--out-dir", "out_dir", "directory for every output and the manifest"},
      {"--seed", "seed", "global seed (falls back to OODKIT_SEED)"},
      {"--threads", "threads", "worker threads for parallel stages"},
  };
  return flags;
}

const std::vector<FlagSpec> kTrainFlags = {
    {"--tau", "tau", "NT-Xent temperature"},
    {"--alpha", "alpha", "Student's t degrees of freedom"},
    {"--batch", "batch", "batch size M"},
    {"--epochs", "epochs", "training epochs"},
    {"--lr", "lr", "learning rate"},
    {"--optimizer", "optimizer", "adam or sgd"},
    {"--activation", "activation", "relu or tanh"},
    {"--dropout", "dropout", "dropout rate on hidden units"},
    {"--hidden-dim", "hidden_dim", "encoder hidden width (0 = input dim)"},
    {"--out-dim", "out_dim", "encoder output width (0 = input dim)"},
    {"--proj-hidden-dim", "proj_hidden_dim", "projection hidden width (0 = input dim)"},
    {"--proj-dim", "proj_dim", "projection output width (0 = input dim)"},
    {"--no-cluster-loss", "cluster_loss", "drop the clustering term", false},
    {"--no-cl-loss", "cl_loss", "drop the contrastive term", false},
    {"--deterministic-q", "deterministic_q", "soft assignments from the dropout-free pass", true},
};

const std::vector<FlagSpec> kDensityFlags = {
    {"--components", "components", "GMM components"},
    {"--eps", "eps", "variance floor"},
    {"--gmm-max-iters", "gmm_max_iters", "EM iteration cap"},
    {"--gmm-tol", "gmm_tol", "EM tolerance per point"},
    {"--id-fpr-budget", "id_fpr_budget", "ID false-positive budget for the threshold"},
};

const std::vector<FlagSpec> kSplitFlags = {
    {"--protocol", "protocol", "coverage, fixed or given"},
    {"--coverage", "coverage", "train-point share of ID classes"},
    {"--n-ood", "n_ood", "OOD classes for the fixed protocol"},
    {"--n-splits", "n_splits", "number of random splits"},
};

std::vector<FlagSpec> concat(std::initializer_list<std::vector<FlagSpec>> parts) {
  std::vector<FlagSpec> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

struct CommandSpec {
  std::string name;
  std::string description;
  std::vector<FlagSpec> flags;
};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"split",
       "generate ID/OOD class splits",
       concat({{{"--in,--dataset", "dataset", "labelled dataset (JSONL)"}}, kSplitFlags})},
      {"lm-score",
       "likelihood-based OOD scores (LN, LR, NLR, LR_ws)",
       {{"--method", "method", "ln, lr, nlr or lr-ws"},
        {"--dataset", "dataset", "dataset (JSONL)"},
        {"--id-logprobs", "id_logprobs", "in-domain token log-probs (default: built-in n-gram)"},
        {"--bg-logprobs", "bg_logprobs", "background token log-probs"},
        {"--bg", "bg", "built-in background: uniform, noisy or corpus:PATH"},
        {"--ngram-order", "ngram_order", "built-in n-gram order"},
        {"--k", "smoothing_k", "add-k smoothing constant"},
        {"--p-noise", "p_noise", "substitution probability for the noisy background"},
        {"--id-fpr-budget", "id_fpr_budget", "ID false-positive budget (with --model-out)"},
        {"--out", "out", "scores file (default scores.jsonl)"},
        {"--model-out", "model_out", "also write an LN model bundle"}}},
      {"noise-corpus",
       "write a word-substitution noised copy of the train split",
       {{"--in,--dataset", "dataset", "dataset (JSONL)"},
        {"--p-noise", "p_noise", "substitution probability"},
        {"--out", "out", "noised corpus (default noisy.txt)"}}},
      {"corr-length",
       "Pearson correlation between log-likelihood score and length",
       {{"--scores", "scores", "scores file"},
        {"--dataset", "dataset", "dataset, for lengths missing from the scores file"},
        {"--out", "out", "result JSON (default corr.json)"}}},
      {"train-rep",
       "train the clustering + contrastive representation head",
       concat({{{"--k", "k", "number of centroids K"},
                {"--gamma", "gamma", "contrastive weight"},
                {"--embeddings", "embeddings", "base embeddings"},
                {"--dataset", "dataset", "dataset (JSONL)"},
                {"--out", "out", "model bundle (default model.json)"}},
               kTrainFlags})},
      {"fit-density",
       "fit the GMM density and calibrate the threshold",
       concat({{{"--embeddings", "embeddings", "base embeddings"},
                {"--dataset", "dataset", "dataset (JSONL)"},
                {"--model-in", "model_in", "bundle with a trained encoder (optional)"},
                {"--model-out", "model_out", "model bundle (default model.json)"}},
               kDensityFlags})},
      {"score",
       "score records with a fitted model",
       {{"--model", "model", "model bundle"},
        {"--embeddings", "embeddings", "base embeddings (density models)"},
        {"--id-logprobs", "id_logprobs", "token log-probs (ln models)"},
        {"--out", "out", "scores file (default scores.jsonl)"}}},
      {"eval",
       "AUROC, AUPR_OOD and FPR@95%TPR of a scores file",
       {{"--scores", "scores", "scores file"},
        {"--dataset", "dataset", "dataset with is_ood flags"},
        {"--eval-split", "eval_split", "test, valid or all"},
        {"--tpr-level", "tpr_level", "TPR level for the FPR metric"},
        {"--out", "out", "report JSON (default report.json)"}}},
      {"sweep",
       "grid search over K and gamma on the validation split",
       concat({{{"--k", "sweep_k", "comma-separated K values"},
                {"--gamma", "sweep_gamma", "comma-separated gamma values"},
                {"--embeddings", "embeddings", "base embeddings"},
                {"--dataset", "dataset", "dataset with is_ood flags"},
                {"--out", "out", "sweep JSON (default sweep.json)"}},
               kTrainFlags, kDensityFlags})},
      {"project",
       "2-D PCA coordinates for plotting",
       {{"--embeddings", "embeddings", "base embeddings"},
        {"--dataset", "dataset", "dataset for is_ood flags (optional)"},
        {"--model", "model", "project through this bundle's encoder (optional)"},
        {"--out", "out", "CSV (default pca.csv)"}}},
      {"serve",
       "HTTP scoring service",
       {{"--model", "model", "model bundle"},
        {"--bind", "bind", "host:port"},
        {"--provider-url", "provider_url", "embedding provider for text requests"},
        {"--timeout-ms", "timeout_ms", "provider timeout"},
        {"--retries", "retries", "provider retries"}}},
      {"pipeline",
       "split -> train-rep -> fit-density -> score -> eval, over a split family",
       concat({{{"--dataset", "dataset", "dataset (JSONL)"},
                {"--embeddings", "embeddings", "base embeddings"},
                {"--k", "k", "number of centroids K"},
                {"--gamma", "gamma", "contrastive weight"},
                {"--no-encoder", "encoder", "skip training: GMM on the base embeddings", false}},
               kSplitFlags, kTrainFlags, kDensityFlags})},
  };
  return specs;
}

std::string flag_for(const std::string& key) {
  std::string f = "--" + key;
  std::replace(f.begin(), f.end(), '_', '-');
  return f;
}

// ---------------------------------------------------------------------------
// Run context

class Run {
 public:
  Run(std::string command, RunConfig cfg, std::ostream& out)
      : cfg(std::move(cfg)), out(out), manifest_(std::move(command), this->cfg) {
    if (this->cfg.out_dir.empty()) throw UsageError("out_dir must not be empty");
    if (this->cfg.threads < 1) throw UsageError("threads must be >= 1");
    out_dir_ = this->cfg.out_dir;
  }

  const RunConfig cfg;
  std::ostream& out;

  const fs::path& out_dir() const { return out_dir_; }

  // Required input setting; the file must exist.
  fs::path input(const std::string& value, const std::string& key) {
    if (value.empty()) {
      throw UsageError("missing required setting \"" + key + "\" (" + flag_for(key) + ")");
    }
    return optional_input(value, key);
  }

  fs::path optional_input(const std::string& value, const std::string& key) {
    if (value.empty()) return {};
    const fs::path p(value);
    if (!fs::is_regular_file(p)) throw DataError(key + ": no such file " + p.string());
    manifest_.add_input(key, p);
    return p;
  }

  // Relative outputs land under out_dir.
  fs::path output(const std::string& value, const std::string& fallback, const std::string& role) {
    fs::create_directories(out_dir_);
    fs::path p = value.empty() ? fs::path(fallback) : fs::path(value);
    if (p.is_relative()) p = out_dir_ / p;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    pending_.push_back({role, p});
    return p;
  }

  void finish() {
    for (const auto& [role, p] : pending_) {
      if (fs::exists(p)) manifest_.add_output(role, p);
    }
    fs::create_directories(out_dir_);
    manifest_.write(out_dir_);
  }

 private:
  fs::path out_dir_;
  Manifest manifest_;
  std::vector<std::pair<std::string, fs::path>> pending_;
};

Dataset load_dataset_checked(Run& run) { return load_dataset(run.input(run.cfg.dataset, "dataset")); }

EmbeddingSet load_embeddings_for(Run& run, const Dataset& dataset) {
  EmbeddingSet emb = load_embeddings(run.input(run.cfg.embeddings, "embeddings"));
  const AlignmentReport rep = validate_alignment(dataset, emb);
  if (!rep.missing_in_aux.empty()) {
    throw DataError("embeddings do not cover the dataset: " + rep.summary());
  }
  if (!rep.extra_in_aux.empty()) {
    log::warn("embeddings contain " + std::to_string(rep.extra_in_aux.size()) +
              " ids absent from the dataset; ignoring them");
  }
  return emb;
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::optional<Split> eval_split_of(const std::string& text) {
  if (text == "all") return std::nullopt;
  if (text == "test") return Split::test;
  if (text == "valid") return Split::valid;
  throw UsageError("eval_split must be test, valid or all, got \"" + text + "\"");
}

SplitParams split_params(const RunConfig& cfg) {
  SplitParams p;
  if (cfg.protocol == "coverage") {
    p.protocol = SplitProtocol::coverage;
  } else if (cfg.protocol == "fixed") {
    p.protocol = SplitProtocol::fixed;
  } else {
    throw UsageError("protocol must be coverage or fixed here, got \"" + cfg.protocol + "\"");
  }
  p.coverage = cfg.coverage;
  p.n_ood_classes = cfg.n_ood;
  return p;
}

json spec_json(const SplitSpec& s) {
  return {{"seed", s.seed},
          {"id_classes", s.id_classes},
          {"ood_classes", s.ood_classes},
          {"coverage", s.coverage}};
}

// ---------------------------------------------------------------------------
// Commands

void cmd_split(Run& run) {
  const Dataset dataset = load_dataset_checked(run);
  if (run.cfg.n_splits < 1) throw UsageError("n_splits must be >= 1");
  const auto specs = make_split_family(dataset, split_params(run.cfg), run.cfg.n_splits, run.cfg.seed);
  json index = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string dir = "split-" + std::to_string(i);
    const auto data_path = run.output(dir + "/dataset.jsonl", "", dir + "/dataset");
    const auto spec_path = run.output(dir + "/split.json", "", dir + "/spec");
    save_dataset(apply_split(dataset, specs[i]), data_path);
    write_text(spec_path, spec_json(specs[i]).dump(2) + "\n");
    index.push_back(spec_json(specs[i]));
  }
  const auto index_path = run.output("splits.json", "", "splits");
  write_text(index_path, index.dump(2) + "\n");
  run.out << "wrote " << specs.size() << " split(s) to " << run.out_dir().string() << '\n';
}

struct StreamRow {
  std::string id;
  std::vector<double> logprobs;
  std::optional<Tokens> tokens;
};

void cmd_lm_score(Run& run) {
  const RunConfig& cfg = run.cfg;
  const LikelihoodMethod method = parse_likelihood_method(cfg.method);
  const fs::path dataset_path = run.optional_input(cfg.dataset, "dataset");
  std::optional<Dataset> dataset;
  if (!dataset_path.empty()) dataset = load_dataset(dataset_path);

  const Corpus train_corpus = dataset ? tokenize_split(*dataset, Split::train) : Corpus{};
  auto require_train = [&](const char* why) {
    if (!dataset) throw UsageError(std::string(why) + " needs --dataset");
    if (train_corpus.empty()) throw DataError(std::string(why) + " needs a nonempty train split");
  };

  // In-domain stream.
  std::vector<StreamRow> rows;
  std::optional<NGramLM> id_lm;
  const fs::path id_path = run.optional_input(cfg.id_logprobs, "id_logprobs");
  if (!id_path.empty()) {
    for (auto& r : load_logprobs(id_path).rows) rows.push_back({r.id, r.logprobs, r.tokens});
  } else {
    require_train("the built-in in-domain LM");
    id_lm = NGramLM::train(train_corpus, cfg.ngram_order, cfg.smoothing_k);
    for (const Record& r : dataset->records()) {
      if (r.split == Split::train) continue;
      Tokens tokens = whitespace_tokens(r.text);
      if (tokens.empty()) throw DataError("record \"" + r.id + "\" has no tokens");
      rows.push_back({r.id, id_lm->logprobs(tokens), tokens});
    }
  }
  auto tokens_of = [&](const StreamRow& row) -> Tokens {
    if (row.tokens) return *row.tokens;
    const Record* rec = dataset ? dataset->find(row.id) : nullptr;
    if (rec == nullptr) {
      throw DataError("no tokens for \"" + row.id + "\"; the built-in background needs tokens or --dataset");
    }
    return whitespace_tokens(rec->text);
  };

  // Background.
  std::string bg = cfg.bg;
  if (method == LikelihoodMethod::lr_ws) {
    if (!bg.empty() && bg != "noisy") throw UsageError("lr-ws uses the noisy background; drop --bg");
    bg = "noisy";
  }
  const bool needs_bg = method != LikelihoodMethod::ln;
  std::optional<TokenLogProbSet> bg_file;
  std::optional<NGramLM> bg_lm;
  std::size_t uniform_support = 0;
  if (needs_bg) {
    if (bg.empty()) {
      const fs::path bg_path = run.optional_input(cfg.bg_logprobs, "bg_logprobs");
      if (bg_path.empty()) throw UsageError("method " + cfg.method + " needs --bg-logprobs or --bg");
      bg_file = load_logprobs(bg_path);
    } else if (bg == "uniform") {
      if (id_lm) {
        uniform_support = id_lm->support_size();
      } else {
        require_train("--bg uniform");
        uniform_support = NGramLM::train(train_corpus, 1, cfg.smoothing_k).support_size();
      }
    } else if (bg == "noisy") {
      require_train("--bg noisy");
      const NoisyCorpus noisy = make_noisy_corpus(train_corpus, {cfg.p_noise, cfg.seed});
      bg_lm = NGramLM::train(noisy.corpus, cfg.ngram_order, cfg.smoothing_k);
    } else if (bg.rfind("corpus:", 0) == 0) {
      const fs::path corpus_path = run.input(bg.substr(7), "bg");
      bg_lm = NGramLM::train(load_text_corpus(corpus_path), cfg.ngram_order, cfg.smoothing_k);
    } else {
      throw UsageError("--bg must be uniform, noisy or corpus:PATH, got \"" + bg + "\"");
    }
  }

  std::vector<ScoreRow> out_rows;
  for (const StreamRow& row : rows) {
    ScoreRow s;
    s.id = row.id;
    s.length = row.logprobs.size();
    s.log_ln = score_ln(row.logprobs);
    if (needs_bg) {
      std::vector<double> bg_lp;
      if (bg_file) {
        const TokenLogProbRow* b = bg_file->find(row.id);
        if (b == nullptr) throw DataError("background log-probs lack \"" + row.id + "\"");
        bg_lp = b->logprobs;
      } else if (bg_lm) {
        bg_lp = bg_lm->logprobs(tokens_of(row));
      } else {
        bg_lp = uniform_logprobs(uniform_support, row.logprobs.size());
      }
      s.log_lr = score_lr(row.logprobs, bg_lp);
      s.log_nlr = score_nlr(row.logprobs, bg_lp);
    }
    switch (method) {
      case LikelihoodMethod::ln: s.ood_score = ood_value(*s.log_ln); break;
      case LikelihoodMethod::nlr: s.ood_score = ood_value(*s.log_nlr); break;
      case LikelihoodMethod::lr:
      case LikelihoodMethod::lr_ws: s.ood_score = ood_value(*s.log_lr); break;
    }
    out_rows.push_back(std::move(s));
  }
  const auto scores_path = run.output(cfg.out, "scores.jsonl", "scores");
  save_scores(out_rows, scores_path);

  if (!cfg.model_out.empty()) {
    if (method != LikelihoodMethod::ln) throw UsageError("--model-out is only supported for --method ln");
    if (!dataset) throw UsageError("--model-out needs --dataset to calibrate the threshold");
    std::vector<double> calib;
    for (const ScoreRow& s : out_rows) {
      const Record* r = dataset->find(s.id);
      if (r && r->split == Split::valid && r->is_ood == false) calib.push_back(s.ood_score);
    }
    if (calib.empty()) throw DataError("no in-domain validation records to calibrate the threshold");
    ModelBundle bundle;
    bundle.method = ScoreMethod::ln;
    bundle.threshold = calibrate_threshold(calib, cfg.id_fpr_budget);
    bundle.config = {{"method", "ln"}, {"id_fpr_budget", cfg.id_fpr_budget}};
    bundle.provenance = {cfg.seed, utc_timestamp(), std::string(kVersion)};
    save_model(bundle, run.output(cfg.model_out, "", "model"));
  }
  run.out << "scored " << out_rows.size() << " record(s) with " << cfg.method << '\n';
}

void cmd_noise_corpus(Run& run) {
  const Dataset dataset = load_dataset_checked(run);
  const Corpus train = tokenize_split(dataset, Split::train);
  const NoisyCorpus noisy = make_noisy_corpus(train, {run.cfg.p_noise, run.cfg.seed});
  std::string text;
  for (const Tokens& seq : noisy.corpus) {
    for (std::size_t i = 0; i < seq.size(); ++i) text += (i ? " " : "") + seq[i];
    text += '\n';
  }
  write_text(run.output(run.cfg.out, "noisy.txt", "corpus"), text);
  const double rate = noisy.n_tokens ? static_cast<double>(noisy.n_selected) / static_cast<double>(noisy.n_tokens) : 0.0;
  print_json(run.out, {{"tokens", noisy.n_tokens}, {"substituted", noisy.n_selected}, {"rate", rate}});
}

void cmd_corr_length(Run& run) {
  const auto rows = load_scores(run.input(run.cfg.scores, "scores"));
  const fs::path dataset_path = run.optional_input(run.cfg.dataset, "dataset");
  std::optional<Dataset> dataset;
  if (!dataset_path.empty()) dataset = load_dataset(dataset_path);
  std::vector<double> values, lengths;
  for (const ScoreRow& r : rows) {
    std::size_t len = 0;
    if (r.length) {
      len = *r.length;
    } else {
      const Record* rec = dataset ? dataset->find(r.id) : nullptr;
      if (rec == nullptr) throw DataError("no length for \"" + r.id + "\"; pass --dataset");
      len = whitespace_tokens(rec->text).size();
    }
    // The log-domain score itself (higher = more in-domain).
    values.push_back(-r.ood_score);
    lengths.push_back(static_cast<double>(len));
  }
  const CorrelationResult c = length_correlation(values, lengths);
  const json j = {{"r", c.r}, {"p_value", c.p_value}, {"n", c.n}};
  write_text(run.output(run.cfg.out, "corr.json", "correlation"), j.dump(2) + "\n");
  print_json(run.out, j);
}

void cmd_train_rep(Run& run) {
  const Dataset dataset = load_dataset_checked(run);
  const EmbeddingSet base = load_embeddings_for(run, dataset);
  const DensityPipelineConfig pc = pipeline_config(run.cfg);
  const Dataset train_view = training_view(dataset);
  ModelBundle bundle;
  bundle.encoder = train(base.gather(train_view.ids()), pc.train);
  bundle.config = to_json(pc);
  bundle.provenance = {run.cfg.seed, utc_timestamp(), std::string(kVersion)};
  save_model(bundle, run.output(run.cfg.out, "model.json", "model"));
  const auto& trace = bundle.encoder->loss_trace;
  run.out << "trained on " << train_view.size() << " record(s)";
  if (!trace.empty()) run.out << ", final loss " << trace.back().joint;
  run.out << '\n';
}

void cmd_fit_density(Run& run) {
  const Dataset dataset = load_dataset_checked(run);
  const EmbeddingSet base = load_embeddings_for(run, dataset);
  const DensityPipelineConfig pc = pipeline_config(run.cfg);
  const fs::path model_in = run.optional_input(run.cfg.model_in, "model_in");
  ModelBundle bundle;
  if (!model_in.empty()) {
    bundle = load_model(model_in);
    if (bundle.method != ScoreMethod::density) throw DataError("--model-in is not a density model");
  } else {
    bundle.config = to_json(pc);
    bundle.config["train_encoder"] = false;
  }
  bundle.config["components"] = pc.gmm.components;
  bundle.config["eps"] = pc.gmm.variance_floor;
  bundle.config["id_fpr_budget"] = pc.id_fpr_budget;
  bundle.provenance = {run.cfg.seed, utc_timestamp(), std::string(kVersion)};

  const Matrix train_base = base.gather(training_view(dataset).ids());
  const Matrix points = bundle.encoder ? embed(*bundle.encoder, train_base) : train_base;
  GmmOptions opts = pc.gmm;
  opts.seed = derive_seed(run.cfg.seed, 4);
  bundle.gmm = fit_gmm(points, opts);

  std::vector<std::string> calib_ids;
  for (const Record* r : dataset.in_split(Split::valid)) {
    if (r->is_ood == false) calib_ids.push_back(r->id);
  }
  if (calib_ids.empty()) {
    log::warn("no in-domain validation records; calibrating the threshold on train records");
    calib_ids = training_view(dataset).ids();
  }
  std::vector<double> calib;
  for (const OODScore& s : density_scores(bundle, base.subset(calib_ids))) calib.push_back(s.value);
  bundle.threshold = calibrate_threshold(calib, pc.id_fpr_budget);
  save_model(bundle, run.output(run.cfg.model_out, "model.json", "model"));
  run.out << "fitted " << bundle.gmm->components() << "-component GMM in " << bundle.gmm->dim()
          << " dims; threshold " << *bundle.threshold << '\n';
}

void cmd_score(Run& run) {
  const ModelBundle bundle = load_model(run.input(run.cfg.model, "model"));
  std::vector<ScoreRow> rows;
  if (bundle.method == ScoreMethod::density) {
    const EmbeddingSet base = load_embeddings(run.input(run.cfg.embeddings, "embeddings"));
    for (const OODScore& s : density_scores(bundle, base)) {
      ScoreRow row;
      row.id = s.id;
      row.ood_score = s.value;
      rows.push_back(std::move(row));
    }
  } else {
    for (const auto& r : load_logprobs(run.input(run.cfg.id_logprobs, "id_logprobs")).rows) {
      ScoreRow s;
      s.id = r.id;
      s.log_ln = score_ln(r.logprobs);
      s.length = r.logprobs.size();
      s.ood_score = ood_value(*s.log_ln);
      rows.push_back(std::move(s));
    }
  }
  if (bundle.threshold) {
    for (ScoreRow& r : rows) r.is_ood = decide_score(r.ood_score, *bundle.threshold).is_ood;
  }
  save_scores(rows, run.output(run.cfg.out, "scores.jsonl", "scores"));
  run.out << "scored " << rows.size() << " record(s)\n";
}

void cmd_eval(Run& run) {
  const auto rows = load_scores(run.input(run.cfg.scores, "scores"));
  const Dataset dataset = load_dataset_checked(run);
  const auto split = eval_split_of(run.cfg.eval_split);
  // Only records present in the scores file take part.
  std::map<std::string, double> by_id;
  for (const ScoreRow& r : rows) by_id[r.id] = r.ood_score;
  ScoredSet set;
  for (const Record& r : dataset.records()) {
    if (!r.is_ood || (split && r.split != *split)) continue;
    const auto it = by_id.find(r.id);
    if (it == by_id.end()) continue;
    (*r.is_ood ? set.ood_scores : set.id_scores).push_back(it->second);
  }
  json config = {{"eval_split", run.cfg.eval_split}, {"tpr_level", run.cfg.tpr_level}};
  EvalReport report = evaluate(set, config);
  report.fpr_at_95tpr = fpr_at_tpr(set, run.cfg.tpr_level);
  const json j = report.to_json();
  write_text(run.output(run.cfg.out, "report.json", "report"), j.dump(2) + "\n");
  SummaryReport summary = aggregate_splits({report});
  write_text(run.output("report.csv", "", "report_csv"), summary_csv(summary));
  print_json(run.out, j);
}

void cmd_sweep(Run& run) {
  const Dataset dataset = load_dataset_checked(run);
  const EmbeddingSet base = load_embeddings_for(run, dataset);
  const DensityPipelineConfig pc = pipeline_config(run.cfg);
  const auto ks = parse_int_list(run.cfg.sweep_k, "sweep_k");
  const auto gammas = parse_double_list(run.cfg.sweep_gamma, "sweep_gamma");
  const SweepResult result = sweep(ks, gammas, validation_evaluator(dataset, base, pc), run.cfg.threads);
  write_text(run.output(run.cfg.out, "sweep.json", "sweep"), result.to_json().dump(2) + "\n");
  write_text(run.output("sweep.csv", "", "sweep_csv"), result.csv());
  run.out << "best K=" << result.best.k << " gamma=" << result.best.gamma
          << " AUPR_OOD=" << result.best.report.aupr_ood << " AUROC=" << result.best.report.auroc << '\n';
}

void cmd_project(Run& run) {
  const EmbeddingSet base = load_embeddings(run.input(run.cfg.embeddings, "embeddings"));
  const fs::path dataset_path = run.optional_input(run.cfg.dataset, "dataset");
  const fs::path model_path = run.optional_input(run.cfg.model, "model");
  Matrix points = base.values();
  if (!model_path.empty()) {
    const ModelBundle bundle = load_model(model_path);
    if (!bundle.encoder) throw DataError("model bundle has no encoder to project through");
    points = embed_corpus(*bundle.encoder, base).values();
  }
  std::vector<int> flags(base.size(), -1);
  if (!dataset_path.empty()) {
    const Dataset dataset = load_dataset(dataset_path);
    for (std::size_t i = 0; i < base.size(); ++i) {
      const Record* r = dataset.find(base.ids()[i]);
      if (r && r->is_ood) flags[i] = *r->is_ood ? 1 : 0;
    }
  }
  const PcaResult pca = pca2d_project(points);
  write_text(run.output(run.cfg.out, "pca.csv", "pca"), pca_csv(base.ids(), pca.coords, flags));
  run.out << "explained variance " << pca.explained(0) << ", " << pca.explained(1) << '\n';
}

void cmd_serve(Run& run) {
  ModelBundle bundle = load_model(run.input(run.cfg.model, "model"));
  require_servable(bundle);
  service::EmbeddingFetcher fetcher;
  if (!run.cfg.provider_url.empty()) {
    service::ProviderConfig provider;
    provider.url = run.cfg.provider_url;
    provider.timeout_ms = run.cfg.timeout_ms;
    provider.retries = run.cfg.retries;
    if (bundle.method == ScoreMethod::density) {
      provider.expected_dim = bundle.encoder ? bundle.encoder->base_dim() : bundle.gmm->dim();
    }
    fetcher = service::provider_fetcher(provider);
  }
  const auto [host, port] = service::parse_bind(run.cfg.bind);
  auto svc = std::make_shared<const service::ScoringService>(std::move(bundle), fetcher);
  run.finish();
  service::HttpServer server(svc);
  server.run(host, port);
}

void cmd_pipeline(Run& run) {
  const Dataset dataset = load_dataset_checked(run);
  const EmbeddingSet base = load_embeddings_for(run, dataset);
  const DensityPipelineConfig pc = pipeline_config(run.cfg);

  std::vector<std::optional<SplitSpec>> specs;
  if (run.cfg.protocol == "given") {
    specs.push_back(std::nullopt);
  } else {
    if (run.cfg.n_splits < 1) throw UsageError("n_splits must be >= 1");
    for (auto& s : make_split_family(dataset, split_params(run.cfg), run.cfg.n_splits, run.cfg.seed)) {
      specs.emplace_back(std::move(s));
    }
  }

  std::vector<EvalReport> reports;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string dir = "split-" + std::to_string(i);
    const Dataset split_data = specs[i] ? apply_split(dataset, *specs[i]) : dataset;
    DensityPipelineConfig cfg_i = pc;
    cfg_i.train.seed = specs[i] ? specs[i]->seed : pc.train.seed;
    PipelineOutput po = run_density_pipeline(split_data, base, cfg_i);
    if (specs[i]) {
      po.test_report.config["split_seed"] = specs[i]->seed;
      write_text(run.output(dir + "/split.json", "", dir + "/spec"), spec_json(*specs[i]).dump(2) + "\n");
    }
    save_model(po.bundle, run.output(dir + "/model.json", "", dir + "/model"));
    std::vector<ScoreRow> rows;
    for (const OODScore& s : po.scores) {
      ScoreRow row;
      row.id = s.id;
      row.ood_score = s.value;
      row.is_ood = decide_score(s.value, *po.bundle.threshold).is_ood;
      rows.push_back(std::move(row));
    }
    save_scores(rows, run.output(dir + "/scores.jsonl", "", dir + "/scores"));
    write_text(run.output(dir + "/report.json", "", dir + "/report"), po.test_report.to_json().dump(2) + "\n");
    run.out << dir << ": AUROC " << po.test_report.auroc << "  AUPR_OOD " << po.test_report.aupr_ood
            << "  FPR@95%TPR " << po.test_report.fpr_at_95tpr << '\n';
    reports.push_back(std::move(po.test_report));
  }
  // Split seeds differ by construction; drop them so the config shapes match.
  for (auto& r : reports) r.config.erase("split_seed");
  const SummaryReport summary = aggregate_splits(reports);
  write_text(run.output("summary.json", "", "summary"), summary.to_json().dump(2) + "\n");
  write_text(run.output("summary.csv", "", "summary_csv"), summary_csv(summary));
  run.out << "mean AUROC " << summary.auroc.mean << " (std " << summary.auroc.std << ")\n";
}

using Handler = void (*)(Run&);

Handler handler_for(const std::string& name) {
  static const std::map<std::string, Handler> table = {
      {"split", cmd_split},         {"lm-score", cmd_lm_score}, {"noise-corpus", cmd_noise_corpus},
      {"corr-length", cmd_corr_length}, {"train-rep", cmd_train_rep}, {"fit-density", cmd_fit_density},
      {"score", cmd_score},         {"eval", cmd_eval},         {"sweep", cmd_sweep},
      {"project", cmd_project},     {"serve", cmd_serve},       {"pipeline", cmd_pipeline}};
  return table.at(name);
}

struct Binding {
  CLI::Option* option;
  std::string key;
  std::optional<bool> sets;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"oodkit: out-of-domain text detection toolkit", "oodkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);

  RunConfig flags;
  std::string config_path;
  std::map<std::string, std::vector<Binding>> bindings;

  for (const CommandSpec& spec : command_specs()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    sub->add_option("--config", config_path, "flat key = value config file (or a run manifest)");
    auto& list = bindings[spec.name];
    std::vector<FlagSpec> all = spec.flags;
    all.insert(all.end(), common_flags().begin(), common_flags().end());
    for (const FlagSpec& f : all) {
      const Field field = *find_field(f.key);
      CLI::Option* opt = nullptr;
      if (f.sets) {
        opt = sub->add_flag(f.names, f.help);
      } else {
        std::visit([&](auto member) { opt = sub->add_option(f.names, flags.*member, f.help); }, field);
      }
      list.push_back({opt, f.key, f.sets});
    }
  }

  if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
      std::find(subcommands().begin(), subcommands().end(), args.front()) == subcommands().end()) {
    err << "error: unknown subcommand \"" << args.front() << "\"\n" << app.help();
    return 1;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = load_config(config_path.empty() ? std::nullopt : std::optional<fs::path>(config_path));
    for (const Binding& b : bindings[command]) {
      if (b.option->count() == 0) continue;
      const Field field = *find_field(b.key);
      if (b.sets) {
        cfg.*std::get<bool RunConfig::*>(field) = *b.sets;
      } else {
        std::visit([&](auto member) { cfg.*member = flags.*member; }, field);
      }
    }
    Run run(command, std::move(cfg), out);
    handler_for(command)(run);
    if (command != "serve") run.finish();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace oodkit::cli
