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

#include <string>
#include <vector>

#include "oodkit/dataset.hpp"
#include "oodkit/embeddings.hpp"
#include "oodkit/logprobs.hpp"

namespace oodkit {

struct AlignmentReport {
  std::vector<std::string> missing_in_aux;  // in the dataset, absent from aux
  std::vector<std::string> extra_in_aux;    // in aux, absent from the dataset

  bool ok() const { return missing_in_aux.empty() && extra_in_aux.empty(); }
  std::string summary() const;
};

// Both lists are sorted. Success iff the two id sets are equal.
AlignmentReport validate_alignment(const std::vector<std::string>& dataset_ids,
                                   const std::vector<std::string>& aux_ids);
AlignmentReport validate_alignment(const Dataset& dataset, const EmbeddingSet& aux);
AlignmentReport validate_alignment(const Dataset& dataset, const TokenLogProbSet& aux);

}  // namespace oodkit
