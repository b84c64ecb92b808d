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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oodkit/pipeline.hpp"

namespace oodkit::cli {

// Every hyperparameter and path any stage reads. Keys in a config file use
// the member names below; command-line flags map onto the same members.
struct RunConfig {
  // paths
  std::string dataset;
  std::string embeddings;
  std::string id_logprobs;
  std::string bg_logprobs;
  std::string scores;
  std::string model;
  std::string model_in;
  std::string model_out;
  std::string out;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 1;

  // splits; protocol "given" uses the dataset's own is_ood flags
  std::string protocol = "coverage";
  double coverage = 0.75;
  int n_ood = 2;
  int n_splits = 5;

  // likelihood
  std::string method = "ln";
  std::string bg = "";  // "", uniform, noisy, corpus:PATH
  int ngram_order = 2;
  double smoothing_k = 1.0;
  double p_noise = 0.5;

  // representation learning
  bool encoder = true;
  int k = 8;
  double gamma = 1.0;
  double tau = 0.5;
  double alpha = 1.0;
  int batch = 64;
  int epochs = 15;
  double lr = 1e-2;
  std::string optimizer = "adam";
  std::string activation = "relu";
  double dropout = 0.1;
  bool cluster_loss = true;
  bool cl_loss = true;
  bool deterministic_q = false;
  int hidden_dim = 0;
  int out_dim = 0;
  int proj_hidden_dim = 0;
  int proj_dim = 0;

  // density
  int components = 1;
  double eps = 1e-6;
  int gmm_max_iters = 200;
  double gmm_tol = 1e-6;

  // evaluation
  double id_fpr_budget = 0.05;
  double tpr_level = 0.95;
  std::string sweep_k = "2,4,8,16,32";
  std::string sweep_gamma = "0.1,1,4";
  std::string eval_split = "test";  // test, valid or all

  // service
  std::string bind = "127.0.0.1:8080";
  std::string provider_url;
  int timeout_ms = 2000;
  int retries = 2;

  bool operator==(const RunConfig&) const = default;
};

using Field = std::variant<std::string RunConfig::*, double RunConfig::*, int RunConfig::*,
                           bool RunConfig::*, std::uint64_t RunConfig::*>;

// Key name -> member, in declaration order.
const std::vector<std::pair<std::string, Field>>& config_fields();
std::optional<Field> find_field(std::string_view key);

// Parses `text` into the member. Throws UsageError naming the key on a type
// mismatch.
void assign(RunConfig& cfg, std::string_view key, const Field& field, std::string_view text);
std::string format_value(const RunConfig& cfg, const Field& field);

// Flat "key = value" lines; '#' starts a comment, values may be quoted.
// Unknown keys, sections and malformed values are UsageErrors.
std::map<std::string, std::string> parse_config_text(std::string_view text,
                                                     std::string_view source = "<config>");

// The "config" object of a run manifest, as key/value text.
std::map<std::string, std::string> parse_manifest_config(std::string_view text,
                                                         std::string_view source);

// Defaults, then OODKIT_SEED (if set), then the file's keys. A file whose
// first character is '{' is read as a run manifest.
RunConfig load_config(const std::optional<std::filesystem::path>& path);

// Applies key/value pairs on top of `cfg`.
void apply_values(RunConfig& cfg, const std::map<std::string, std::string>& values);

// Full snapshot in config-file syntax; loading it reproduces `cfg`.
std::string to_config_text(const RunConfig& cfg);
nlohmann::json to_json(const RunConfig& cfg);

// Stage configurations derived from the run config. Throw UsageError on
// invalid enum strings.
TrainConfig train_config(const RunConfig& cfg);
DensityPipelineConfig pipeline_config(const RunConfig& cfg);

std::vector<int> parse_int_list(std::string_view text, std::string_view key);
std::vector<double> parse_double_list(std::string_view text, std::string_view key);

}  // namespace oodkit::cli
