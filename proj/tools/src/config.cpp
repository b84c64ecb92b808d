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

#include "oodkit/cli/config.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oodkit/error.hpp"

namespace oodkit::cli {

const std::vector<std::pair<std::string, Field>>& config_fields() {
  using R = RunConfig;
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"dataset", &R::dataset},
      {"embeddings", &R::embeddings},
      {"id_logprobs", &R::id_logprobs},
      {"bg_logprobs", &R::bg_logprobs},
      {"scores", &R::scores},
      {"model", &R::model},
      {"model_in", &R::model_in},
      {"model_out", &R::model_out},
      {"out", &R::out},
      {"out_dir", &R::out_dir},
      {"seed", &R::seed},
      {"threads", &R::threads},
      {"protocol", &R::protocol},
      {"coverage", &R::coverage},
      {"n_ood", &R::n_ood},
      {"n_splits", &R::n_splits},
      {"method", &R::method},
      {"bg", &R::bg},
      {"ngram_order", &R::ngram_order},
      {"smoothing_k", &R::smoothing_k},
      {"p_noise", &R::p_noise},
      {"encoder", &R::encoder},
      {"k", &R::k},
      {"gamma", &R::gamma},
      {"tau", &R::tau},
      {"alpha", &R::alpha},
      {"batch", &R::batch},
      {"epochs", &R::epochs},
      {"lr", &R::lr},
      {"optimizer", &R::optimizer},
      {"activation", &R::activation},
      {"dropout", &R::dropout},
      {"cluster_loss", &R::cluster_loss},
      {"cl_loss", &R::cl_loss},
      {"deterministic_q", &R::deterministic_q},
      {"hidden_dim", &R::hidden_dim},
      {"out_dim", &R::out_dim},
      {"proj_hidden_dim", &R::proj_hidden_dim},
      {"proj_dim", &R::proj_dim},
      {"components", &R::components},
      {"eps", &R::eps},
      {"gmm_max_iters", &R::gmm_max_iters},
      {"gmm_tol", &R::gmm_tol},
      {"id_fpr_budget", &R::id_fpr_budget},
      {"tpr_level", &R::tpr_level},
      {"sweep_k", &R::sweep_k},
      {"sweep_gamma", &R::sweep_gamma},
      {"eval_split", &R::eval_split},
      {"bind", &R::bind},
      {"provider_url", &R::provider_url},
      {"timeout_ms", &R::timeout_ms},
      {"retries", &R::retries},
  };
  return fields;
}

std::optional<Field> find_field(std::string_view key) {
  for (const auto& [name, field] : config_fields()) {
    if (name == key) return field;
  }
  return std::nullopt;
}

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view text, const char* type) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw UsageError("config key \"" + std::string(key) + "\" expects " + type + ", got \"" +
                     std::string(text) + "\"");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw UsageError("config key \"" + std::string(key) + "\" expects true or false, got \"" +
                   std::string(text) + "\"");
}

std::string format_double(double v) {
  // Shortest text that reads back to the same double.
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void assign(RunConfig& cfg, std::string_view key, const Field& field, std::string_view text) {
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          cfg.*member = std::string(text);
        } else if constexpr (std::is_same_v<T, bool>) {
          cfg.*member = parse_bool(key, text);
        } else if constexpr (std::is_same_v<T, double>) {
          cfg.*member = parse_number<double>(key, text, "a real number");
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          cfg.*member = parse_number<std::uint64_t>(key, text, "a non-negative integer");
        } else {
          cfg.*member = parse_number<int>(key, text, "an integer");
        }
      },
      field);
}

std::string format_value(const RunConfig& cfg, const Field& field) {
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return cfg.*member;
        } else if constexpr (std::is_same_v<T, bool>) {
          return cfg.*member ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(cfg.*member);
        } else {
          return std::to_string(cfg.*member);
        }
      },
      field);
}

std::map<std::string, std::string> parse_config_text(std::string_view text, std::string_view source) {
  std::istringstream in{std::string(text)};
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw UsageError(std::string(source) + ": " + e.what());
  }
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    // Section markers come back as "++"/"--" entries.
    if (item.name == "++" || item.name == "--" || !item.parents.empty()) {
      throw UsageError(std::string(source) + ": sections are not supported; use flat keys");
    }
    if (!find_field(item.name)) {
      throw UsageError(std::string(source) + ": unknown config key \"" + item.name + "\"");
    }
    if (item.inputs.size() != 1) {
      throw UsageError(std::string(source) + ": config key \"" + item.name +
                       "\" expects a single value");
    }
    out[item.name] = item.inputs.front();
  }
  return out;
}

std::map<std::string, std::string> parse_manifest_config(std::string_view text,
                                                         std::string_view source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string(source) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("config") || !j["config"].is_object()) {
    throw UsageError(std::string(source) + ": JSON config must be a run manifest with a \"config\" object");
  }
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : j["config"].items()) {
    if (!find_field(key)) throw UsageError(std::string(source) + ": unknown config key \"" + key + "\"");
    if (value.is_string()) {
      out[key] = value.get<std::string>();
    } else if (value.is_boolean()) {
      out[key] = value.get<bool>() ? "true" : "false";
    } else if (value.is_number_float()) {
      out[key] = format_double(value.get<double>());
    } else if (value.is_number()) {
      out[key] = value.dump();
    } else {
      throw UsageError(std::string(source) + ": config key \"" + key + "\" has a non-scalar value");
    }
  }
  return out;
}

void apply_values(RunConfig& cfg, const std::map<std::string, std::string>& values) {
  for (const auto& [key, text] : values) {
    const auto field = find_field(key);
    if (!field) throw UsageError("unknown config key \"" + key + "\"");
    assign(cfg, key, *field, text);
  }
}

RunConfig load_config(const std::optional<std::filesystem::path>& path) {
  RunConfig cfg;
  if (const char* env = std::getenv("OODKIT_SEED"); env != nullptr && *env != '\0') {
    assign(cfg, "OODKIT_SEED", Field{&RunConfig::seed}, env);
  }
  if (path) {
    std::ifstream in(*path);
    if (!in) throw UsageError("cannot read config file " + path->string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      apply_values(cfg, parse_manifest_config(text, path->string()));
    } else {
      apply_values(cfg, parse_config_text(text, path->string()));
    }
  }
  return cfg;
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : config_fields()) {
    std::string value = format_value(cfg, field);
    if (std::holds_alternative<std::string RunConfig::*>(field)) {
      std::string quoted = "\"";
      for (char c : value) {
        if (c == '"' || c == '\\') quoted += '\\';
        quoted += c;
      }
      value = quoted + "\"";
    }
    out += name + " = " + value + "\n";
  }
  return out;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, field] : config_fields()) {
    std::visit([&](auto member) { j[name] = cfg.*member; }, field);
  }
  return j;
}

TrainConfig train_config(const RunConfig& cfg) {
  TrainConfig t;
  t.k = cfg.k;
  t.gamma = cfg.gamma;
  t.tau = cfg.tau;
  t.alpha = cfg.alpha;
  t.batch_size = cfg.batch;
  t.epochs = cfg.epochs;
  t.learning_rate = cfg.lr;
  t.optimizer = parse_optimizer(cfg.optimizer);
  t.activation = parse_activation(cfg.activation);
  t.dropout = cfg.dropout;
  t.seed = cfg.seed;
  t.cluster_loss_on = cfg.cluster_loss;
  t.cl_loss_on = cfg.cl_loss;
  t.deterministic_q = cfg.deterministic_q;
  t.hidden_dim = cfg.hidden_dim;
  t.out_dim = cfg.out_dim;
  t.proj_hidden_dim = cfg.proj_hidden_dim;
  t.proj_dim = cfg.proj_dim;
  t.validate();
  return t;
}

DensityPipelineConfig pipeline_config(const RunConfig& cfg) {
  DensityPipelineConfig p;
  p.train_encoder = cfg.encoder;
  p.train = train_config(cfg);
  if (cfg.components < 1) throw UsageError("components must be >= 1");
  if (!(cfg.eps > 0.0)) throw UsageError("eps must be > 0");
  if (!(cfg.id_fpr_budget >= 0.0 && cfg.id_fpr_budget < 1.0)) {
    throw UsageError("id_fpr_budget must be in [0, 1)");
  }
  p.gmm.components = static_cast<std::size_t>(cfg.components);
  p.gmm.variance_floor = cfg.eps;
  p.gmm.max_iters = cfg.gmm_max_iters;
  p.gmm.tol = cfg.gmm_tol;
  p.id_fpr_budget = cfg.id_fpr_budget;
  return p;
}

namespace {

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text, std::string_view key) {
  std::vector<int> out;
  for (const auto& p : split_list(text)) out.push_back(parse_number<int>(key, p, "an integer list"));
  return out;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view key) {
  std::vector<double> out;
  for (const auto& p : split_list(text)) {
    out.push_back(parse_number<double>(key, p, "a list of real numbers"));
  }
  return out;
}

}  // namespace oodkit::cli
