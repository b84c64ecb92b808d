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

#include "oodkit/logprobs.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "oodkit/error.hpp"

namespace oodkit {

using nlohmann::json;

const TokenLogProbRow* TokenLogProbSet::find(std::string_view id) const {
  for (const auto& r : rows) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::vector<std::string> TokenLogProbSet::ids() const {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.id);
  return out;
}

namespace {

TokenLogProbRow row_from_json(const json& j) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  TokenLogProbRow row;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) throw DataError("missing string field \"id\"");
  row.id = id->get<std::string>();
  const auto lp = j.find("logprobs");
  if (lp == j.end() || !lp->is_array()) throw DataError("missing array field \"logprobs\"");
  for (const auto& v : *lp) {
    if (!v.is_number()) throw DataError("non-numeric log-probability in \"" + row.id + "\"");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x > 0.0) {
      throw DataError("log-probability out of range in \"" + row.id + "\"");
    }
    row.logprobs.push_back(x);
  }
  if (row.logprobs.empty()) throw DataError("empty log-probability sequence for \"" + row.id + "\"");
  if (const auto t = j.find("tokens"); t != j.end() && !t->is_null()) {
    row.tokens = t->get<std::vector<std::string>>();
    if (row.tokens->size() != row.logprobs.size()) {
      throw DataError("tokens/logprobs length mismatch for \"" + row.id + "\"");
    }
  }
  return row;
}

}  // namespace

TokenLogProbSet parse_logprobs(std::istream& in, std::string_view source) {
  TokenLogProbSet set;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    try {
      auto row = row_from_json(json::parse(line));
      if (!seen.insert(row.id).second) throw DataError("duplicate id \"" + row.id + "\"");
      set.rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw DataError(where + "malformed line: " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  }
  return set;
}

TokenLogProbSet load_logprobs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open log-prob file " + path.string());
  return parse_logprobs(in, path.string());
}

void write_logprobs(std::ostream& out, const TokenLogProbSet& set) {
  for (const auto& r : set.rows) {
    json j = {{"id", r.id}, {"logprobs", r.logprobs}};
    if (r.tokens) j["tokens"] = *r.tokens;
    out << j.dump() << '\n';
  }
}

void save_logprobs(const TokenLogProbSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write log-prob file " + path.string());
  write_logprobs(out, set);
}

}  // namespace oodkit
