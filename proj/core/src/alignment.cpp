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

#include "oodkit/alignment.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

namespace oodkit {

std::string AlignmentReport::summary() const {
  if (ok()) return "aligned";
  std::ostringstream os;
  const auto list = [&](const char* label, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    os << label << " (" << ids.size() << "):";
    for (std::size_t i = 0; i < ids.size() && i < 10; ++i) os << ' ' << ids[i];
    if (ids.size() > 10) os << " ...";
    os << "; ";
  };
  list("missing in aux", missing_in_aux);
  list("extra in aux", extra_in_aux);
  return os.str();
}

AlignmentReport validate_alignment(const std::vector<std::string>& dataset_ids,
                                   const std::vector<std::string>& aux_ids) {
  auto a = dataset_ids;
  auto b = aux_ids;
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  AlignmentReport report;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(report.missing_in_aux));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(),
                      std::back_inserter(report.extra_in_aux));
  return report;
}

AlignmentReport validate_alignment(const Dataset& dataset, const EmbeddingSet& aux) {
  return validate_alignment(dataset.ids(), aux.ids());
}

AlignmentReport validate_alignment(const Dataset& dataset, const TokenLogProbSet& aux) {
  return validate_alignment(dataset.ids(), aux.ids());
}

}  // namespace oodkit
