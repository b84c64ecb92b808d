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

#include "oodkit/dataset.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "oodkit/error.hpp"
#include "oodkit/log.hpp"

namespace oodkit {

using nlohmann::json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "valid") return Split::valid;
  if (text == "test") return Split::test;
  throw DataError("unknown split tag \"" + std::string(text) + "\"");
}

Dataset::Dataset(std::vector<Record> records) : records_(std::move(records)) {
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].id, i).second) {
      throw DataError("duplicate record id \"" + records_[i].id + "\"");
    }
  }
}

const Record* Dataset::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<std::string> Dataset::ids() const {
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.id);
  return out;
}

std::vector<const Record*> Dataset::in_split(Split split) const {
  std::vector<const Record*> out;
  for (const auto& r : records_) {
    if (r.split == split) out.push_back(&r);
  }
  return out;
}

namespace {

Record record_from_json(const json& j) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  Record r;
  const auto need_string = [&](const char* key) -> std::string {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw DataError(std::string("missing or non-string field \"") + key + "\"");
    }
    return it->get<std::string>();
  };
  r.id = need_string("id");
  if (r.id.empty()) throw DataError("empty record id");
  r.text = need_string("text");
  r.split = parse_split(need_string("split"));
  if (const auto it = j.find("label"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError("field \"label\" must be a string or null");
    r.label = it->get<std::string>();
  }
  if (const auto it = j.find("is_ood"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean()) throw DataError("field \"is_ood\" must be a boolean");
    r.is_ood = it->get<bool>();
  }
  return r;
}

json record_to_json(const Record& r) {
  json j = json::object();
  j["id"] = r.id;
  j["text"] = r.text;
  j["label"] = r.label ? json(*r.label) : json(nullptr);
  j["split"] = std::string(to_string(r.split));
  if (r.is_ood) j["is_ood"] = *r.is_ood;
  return j;
}

}  // namespace

Dataset parse_dataset(std::istream& in, std::string_view source) {
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                      ": malformed line: " + e.what());
    } catch (const DataError& e) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (records.empty()) log::warn(std::string(source) + ": dataset is empty");
  try {
    return Dataset(std::move(records));
  } catch (const DataError& e) {
    throw DataError(std::string(source) + ": " + e.what());
  }
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path.string());
  return parse_dataset(in, path.string());
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  for (const auto& r : dataset.records()) out << record_to_json(r).dump() << '\n';
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset " + path.string());
  write_dataset(out, dataset);
}

Dataset training_view(const Dataset& dataset) {
  std::vector<Record> out;
  for (const auto& r : dataset.records()) {
    if (r.split != Split::train) continue;
    Record copy = r;
    copy.label.reset();
    copy.is_ood.reset();
    out.push_back(std::move(copy));
  }
  return Dataset(std::move(out));
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace oodkit
