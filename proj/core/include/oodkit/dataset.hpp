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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace oodkit {

enum class Split { train, valid, test };

std::string_view to_string(Split split);
// Throws DataError on anything other than train/valid/test.
Split parse_split(std::string_view text);

struct Record {
  std::string id;
  std::string text;
  std::optional<std::string> label;  // hidden class, only read by splits/eval
  Split split = Split::train;
  std::optional<bool> is_ood;

  bool operator==(const Record&) const = default;
};

// Ordered collection of records with unique ids.
class Dataset {
 public:
  Dataset() = default;
  // Throws DataError naming the first duplicate id.
  explicit Dataset(std::vector<Record> records);

  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const Record* find(std::string_view id) const;
  std::vector<std::string> ids() const;

  // Records of one split, in file order.
  std::vector<const Record*> in_split(Split split) const;

  bool operator==(const Dataset& other) const { return records_ == other.records_; }

 private:
  std::vector<Record> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// One JSON object per line: {"id", "text", "label" (nullable), "split",
// optional "is_ood"}. Blank lines are skipped. `source` names the input in
// error messages ("data.jsonl:12: ...").
Dataset parse_dataset(std::istream& in, std::string_view source = "<stream>");
Dataset load_dataset(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

// Train records with labels and OOD flags removed; the only view the
// representation learner is given.
Dataset training_view(const Dataset& dataset);

// Whitespace tokenisation used by the built-in n-gram models.
std::vector<std::string> whitespace_tokens(std::string_view text);

}  // namespace oodkit
