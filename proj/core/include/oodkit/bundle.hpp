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
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>

#include "oodkit/gmm.hpp"
#include "oodkit/trainer.hpp"

namespace oodkit {

inline constexpr int kBundleFormatVersion = 1;

// How a served bundle turns a request into an OOD score.
enum class ScoreMethod {
  density,  // -log GMM density of the (optionally encoded) embedding
  ln,       // -mean token log-probability
};

std::string_view to_string(ScoreMethod m);
ScoreMethod parse_score_method(std::string_view text);

struct Provenance {
  std::uint64_t seed = 0;
  std::string created_at;  // ISO-8601 UTC
  std::string tool_version;

  bool operator==(const Provenance&) const = default;
};

struct ModelBundle {
  int format_version = kBundleFormatVersion;
  ScoreMethod method = ScoreMethod::density;
  std::optional<EncoderState> encoder;
  std::optional<GmmModel> gmm;
  std::optional<double> threshold;
  nlohmann::json config = nlohmann::json::object();
  Provenance provenance;

  bool operator==(const ModelBundle&) const = default;
};

// Single JSON document. Doubles are written in shortest round-trip form, so
// load(save(b)) == b bit for bit.
nlohmann::json bundle_to_json(const ModelBundle& bundle);
// Throws DataError on an unknown format_version or a schema mismatch.
ModelBundle bundle_from_json(const nlohmann::json& j);

std::string serialize_bundle(const ModelBundle& bundle);
void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

// SHA-256 of the serialised bundle.
std::string bundle_digest(const ModelBundle& bundle);

// Throws DataError unless the bundle carries a threshold and, for the
// density method, a GMM.
void require_servable(const ModelBundle& bundle);

// ISO-8601 UTC; honours SOURCE_DATE_EPOCH when set.
std::string utc_timestamp();

}  // namespace oodkit
