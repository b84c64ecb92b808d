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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oodkit/dataset.hpp"

namespace oodkit {

// Partition of the label set into in-domain and out-of-domain classes.
struct SplitSpec {
  std::uint64_t seed = 0;
  std::vector<std::string> id_classes;   // sorted
  std::vector<std::string> ood_classes;  // sorted, nonempty
  double coverage = 1.0;                 // share of train points held by id_classes

  bool operator==(const SplitSpec&) const = default;
};

struct SplitResult {
  SplitSpec spec;
  Dataset dataset;
};

enum class SplitProtocol { coverage, fixed };

struct SplitParams {
  SplitProtocol protocol = SplitProtocol::coverage;
  double coverage = 0.75;
  int n_ood_classes = 2;
};

// Given (label, train count) pairs in permutation order, the length of the
// shortest prefix whose cumulative share of all train points is >= coverage.
std::size_t coverage_prefix_length(const std::vector<std::pair<std::string, std::size_t>>& ordered,
                                   double coverage);

// Classes are permuted with the seed; the minimal covering prefix becomes
// the in-domain set. A permutation whose prefix is every class is redrawn.
// Throws DataError on unlabeled train records, fewer than two labels, or a
// coverage that no proper subset of classes can reach; UsageError when
// coverage is outside (0, 1].
SplitResult make_coverage_split(const Dataset& dataset, double coverage, std::uint64_t seed);

// n_ood_classes labels drawn uniformly without replacement become OOD.
SplitResult make_fixed_ood_split(const Dataset& dataset, int n_ood_classes, std::uint64_t seed);

SplitResult make_split(const Dataset& dataset, const SplitParams& params, std::uint64_t seed);

// OOD train records are dropped; valid/test records get is_ood set from
// their label's side of the partition.
Dataset apply_split(const Dataset& dataset, const SplitSpec& spec);

// Up to n_splits specs with distinct class partitions, seeded base_seed + i
// for successive attempts i. Returns fewer (with a warning) when the
// protocol admits fewer distinct partitions.
std::vector<SplitSpec> make_split_family(const Dataset& dataset, const SplitParams& params,
                                         int n_splits, std::uint64_t base_seed);

// Sorted distinct labels and their train-split counts.
std::vector<std::pair<std::string, std::size_t>> train_label_counts(const Dataset& dataset);

}  // namespace oodkit
