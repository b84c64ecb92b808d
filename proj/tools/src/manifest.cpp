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

#include "oodkit/cli/manifest.hpp"

#include "oodkit/cli/artifacts.hpp"
#include "oodkit/digest.hpp"
#include "oodkit/version.hpp"

namespace oodkit::cli {

Manifest::Manifest(std::string command, RunConfig cfg) : command_(std::move(command)), cfg_(std::move(cfg)) {}

void Manifest::add_input(const std::string& role, const std::filesystem::path& path) {
  inputs_.push_back({role, path});
}

void Manifest::add_output(const std::string& role, const std::filesystem::path& path) {
  outputs_.push_back({role, path});
}

nlohmann::json Manifest::to_json() const {
  auto entries = [](const std::vector<Entry>& list) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : list) {
      j.push_back({{"role", e.role}, {"path", e.path.generic_string()}, {"sha256", sha256_file(e.path)}});
    }
    return j;
  };
  return {{"tool", "oodkit"},
          {"version", std::string(kVersion)},
          {"command", command_},
          {"seed", cfg_.seed},
          {"config", cli::to_json(cfg_)},
          {"inputs", entries(inputs_)},
          {"outputs", entries(outputs_)}};
}

std::filesystem::path Manifest::write(const std::filesystem::path& out_dir) const {
  const auto path = out_dir / (command_ + ".manifest.json");
  write_text(path, to_json().dump(2) + "\n");
  return path;
}

}  // namespace oodkit::cli
