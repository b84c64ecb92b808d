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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oodkit {

struct TokenLogProbRow {
  std::string id;
  std::vector<double> logprobs;  // natural log, each <= 0
  std::optional<std::vector<std::string>> tokens;

  bool operator==(const TokenLogProbRow&) const = default;
};

struct TokenLogProbSet {
  std::vector<TokenLogProbRow> rows;

  const TokenLogProbRow* find(std::string_view id) const;
  std::vector<std::string> ids() const;
};

// One JSON object per line: {"id", "logprobs": [...], optional "tokens"}.
// Lines whose first non-space character is '#' are header/comment lines.
// Throws DataError with the line number on empty sequences, positive or
// non-finite entries, token/logprob length mismatch and duplicate ids.
TokenLogProbSet parse_logprobs(std::istream& in, std::string_view source = "<stream>");
TokenLogProbSet load_logprobs(const std::filesystem::path& path);

void write_logprobs(std::ostream& out, const TokenLogProbSet& set);
void save_logprobs(const TokenLogProbSet& set, const std::filesystem::path& path);

}  // namespace oodkit
