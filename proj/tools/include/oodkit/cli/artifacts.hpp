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
#include <optional>
#include <string>
#include <vector>

#include "oodkit/likelihood.hpp"

namespace oodkit::cli {

// One line of a scores file.
struct ScoreRow {
  std::string id;
  double ood_score = 0.0;
  std::optional<bool> is_ood;  // decision, when a threshold was applied
  std::optional<std::size_t> length;
  std::optional<double> log_ln;
  std::optional<double> log_lr;
  std::optional<double> log_nlr;

  bool operator==(const ScoreRow&) const = default;
};

void save_scores(const std::vector<ScoreRow>& rows, const std::filesystem::path& path);
std::vector<ScoreRow> load_scores(const std::filesystem::path& path);
std::vector<OODScore> to_ood_scores(const std::vector<ScoreRow>& rows);

// Whitespace-tokenised lines of a plain text file (blank lines skipped).
Corpus load_text_corpus(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace oodkit::cli
