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

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "oodkit/cli/config.hpp"

namespace oodkit::cli {

// Records a run's inputs and outputs and writes the manifest: command,
// version, seed, full config snapshot and SHA-256 digests of every artifact.
// No timestamps, so identical runs give identical manifests.
class Manifest {
 public:
  Manifest(std::string command, RunConfig cfg);

  void add_input(const std::string& role, const std::filesystem::path& path);
  void add_output(const std::string& role, const std::filesystem::path& path);

  nlohmann::json to_json() const;
  std::filesystem::path write(const std::filesystem::path& out_dir) const;

 private:
  struct Entry {
    std::string role;
    std::filesystem::path path;
  };
  std::string command_;
  RunConfig cfg_;
  std::vector<Entry> inputs_;
  std::vector<Entry> outputs_;
};

}  // namespace oodkit::cli
