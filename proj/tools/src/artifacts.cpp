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

#include "oodkit/cli/artifacts.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "oodkit/dataset.hpp"
#include "oodkit/error.hpp"

namespace oodkit::cli {

using nlohmann::json;

void save_scores(const std::vector<ScoreRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const ScoreRow& r : rows) {
    json j = {{"id", r.id}, {"ood_score", r.ood_score}};
    if (r.is_ood) j["is_ood"] = *r.is_ood;
    if (r.length) j["length"] = *r.length;
    if (r.log_ln) j["log_ln"] = *r.log_ln;
    if (r.log_lr) j["log_lr"] = *r.log_lr;
    if (r.log_nlr) j["log_nlr"] = *r.log_nlr;
    out << j.dump() << '\n';
  }
}

std::vector<ScoreRow> load_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scores file " + path.string());
  std::vector<ScoreRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    try {
      const json j = json::parse(line);
      ScoreRow r;
      r.id = j.at("id").get<std::string>();
      r.ood_score = j.at("ood_score").get<double>();
      if (j.contains("is_ood")) r.is_ood = j["is_ood"].get<bool>();
      if (j.contains("length")) r.length = j["length"].get<std::size_t>();
      if (j.contains("log_ln")) r.log_ln = j["log_ln"].get<double>();
      if (j.contains("log_lr")) r.log_lr = j["log_lr"].get<double>();
      if (j.contains("log_nlr")) r.log_nlr = j["log_nlr"].get<double>();
      rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError(where + e.what());
    }
  }
  return rows;
}

std::vector<OODScore> to_ood_scores(const std::vector<ScoreRow>& rows) {
  std::vector<OODScore> out;
  out.reserve(rows.size());
  for (const ScoreRow& r : rows) out.push_back({r.id, r.ood_score});
  return out;
}

Corpus load_text_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path.string());
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = whitespace_tokens(line);
    if (!tokens.empty()) corpus.push_back(std::move(tokens));
  }
  return corpus;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

}  // namespace oodkit::cli
