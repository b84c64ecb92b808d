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

#include "oodkit/splits.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <span>

#include "oodkit/error.hpp"
#include "oodkit/log.hpp"
#include "oodkit/random.hpp"

namespace oodkit {

std::vector<std::pair<std::string, std::size_t>> train_label_counts(const Dataset& dataset) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : dataset.records()) {
    if (r.split == Split::train && !r.label) {
      throw DataError("train record \"" + r.id + "\" has no label");
    }
    if (r.label) counts.try_emplace(*r.label, 0);
    if (r.split == Split::train) ++counts[*r.label];
  }
  return {counts.begin(), counts.end()};
}

std::size_t coverage_prefix_length(const std::vector<std::pair<std::string, std::size_t>>& ordered,
                                   double coverage) {
  std::size_t total = 0;
  for (const auto& [label, count] : ordered) total += count;
  const double needed = coverage * static_cast<double>(total);
  std::size_t cumulative = 0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    cumulative += ordered[i].second;
    if (static_cast<double>(cumulative) >= needed) return i + 1;
  }
  return ordered.size();
}

namespace {

SplitResult finish(const Dataset& dataset, SplitSpec spec) {
  std::sort(spec.id_classes.begin(), spec.id_classes.end());
  std::sort(spec.ood_classes.begin(), spec.ood_classes.end());
  Dataset transformed = apply_split(dataset, spec);
  return {std::move(spec), std::move(transformed)};
}

double share_of(const std::vector<std::pair<std::string, std::size_t>>& counts,
                const std::vector<std::string>& classes) {
  std::size_t total = 0;
  std::size_t kept = 0;
  for (const auto& [label, count] : counts) {
    total += count;
    if (std::find(classes.begin(), classes.end(), label) != classes.end()) kept += count;
  }
  return total == 0 ? 0.0 : static_cast<double>(kept) / static_cast<double>(total);
}

}  // namespace

SplitResult make_coverage_split(const Dataset& dataset, double coverage, std::uint64_t seed) {
  if (!(coverage > 0.0 && coverage <= 1.0)) {
    throw UsageError("coverage must lie in (0, 1], got " + std::to_string(coverage));
  }
  const auto counts = train_label_counts(dataset);
  if (counts.size() < 2) throw DataError("coverage split needs at least 2 distinct labels");

  std::size_t total = 0;
  std::size_t smallest = counts.front().second;
  for (const auto& [label, count] : counts) {
    total += count;
    smallest = std::min(smallest, count);
  }
  // Some permutation leaves a class out iff dropping the smallest class
  // still meets the coverage; otherwise every permutation is exhausted.
  if (static_cast<double>(total - smallest) < coverage * static_cast<double>(total)) {
    throw DataError("coverage " + std::to_string(coverage) +
                    " needs every class; no OOD class would remain");
  }

  Rng rng(seed);
  auto order = counts;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    rng.shuffle(std::span(order));
    const std::size_t prefix = coverage_prefix_length(order, coverage);
    if (prefix == order.size()) continue;
    SplitSpec spec;
    spec.seed = seed;
    spec.coverage = coverage;
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < prefix ? spec.id_classes : spec.ood_classes).push_back(order[i].first);
    }
    return finish(dataset, std::move(spec));
  }
  throw DataError("coverage split: no permutation left an OOD class");
}

SplitResult make_fixed_ood_split(const Dataset& dataset, int n_ood_classes, std::uint64_t seed) {
  const auto counts = train_label_counts(dataset);
  if (n_ood_classes < 1 || static_cast<std::size_t>(n_ood_classes) >= counts.size()) {
    throw UsageError("n_ood_classes must be in [1, " + std::to_string(counts.size()) +
                     "), got " + std::to_string(n_ood_classes));
  }
  std::vector<std::string> labels;
  for (const auto& [label, count] : counts) labels.push_back(label);
  Rng rng(seed);
  rng.shuffle(std::span(labels));
  SplitSpec spec;
  spec.seed = seed;
  const auto n_ood = static_cast<std::size_t>(n_ood_classes);
  spec.ood_classes.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_ood));
  spec.id_classes.assign(labels.begin() + static_cast<std::ptrdiff_t>(n_ood), labels.end());
  spec.coverage = share_of(counts, spec.id_classes);
  return finish(dataset, std::move(spec));
}

SplitResult make_split(const Dataset& dataset, const SplitParams& params, std::uint64_t seed) {
  switch (params.protocol) {
    case SplitProtocol::coverage: return make_coverage_split(dataset, params.coverage, seed);
    case SplitProtocol::fixed: return make_fixed_ood_split(dataset, params.n_ood_classes, seed);
  }
  throw UsageError("unknown split protocol");
}

Dataset apply_split(const Dataset& dataset, const SplitSpec& spec) {
  const std::set<std::string> ood(spec.ood_classes.begin(), spec.ood_classes.end());
  std::vector<Record> out;
  out.reserve(dataset.size());
  for (const auto& r : dataset.records()) {
    const bool is_ood = r.label && ood.count(*r.label) > 0;
    if (r.split == Split::train) {
      if (is_ood) continue;
      Record copy = r;
      copy.is_ood.reset();
      out.push_back(std::move(copy));
    } else {
      if (!r.label) throw DataError("evaluation record \"" + r.id + "\" has no label");
      Record copy = r;
      copy.is_ood = is_ood;
      out.push_back(std::move(copy));
    }
  }
  return Dataset(std::move(out));
}

std::vector<SplitSpec> make_split_family(const Dataset& dataset, const SplitParams& params,
                                         int n_splits, std::uint64_t base_seed) {
  if (n_splits < 1) throw UsageError("n_splits must be >= 1");
  std::vector<SplitSpec> family;
  std::set<std::vector<std::string>> seen;
  const int max_attempts = 64 * n_splits + 64;
  for (int i = 0; i < max_attempts && static_cast<int>(family.size()) < n_splits; ++i) {
    auto result = make_split(dataset, params, base_seed + static_cast<std::uint64_t>(i));
    if (seen.insert(result.spec.ood_classes).second) family.push_back(std::move(result.spec));
  }
  if (static_cast<int>(family.size()) < n_splits) {
    log::warn("split family: only " + std::to_string(family.size()) +
              " distinct partitions found, " + std::to_string(n_splits) + " requested");
  }
  return family;
}

}  // namespace oodkit
