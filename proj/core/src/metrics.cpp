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

#include "oodkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "oodkit/error.hpp"

namespace oodkit {
namespace {

void require_both(const ScoredSet& s) {
  if (s.ood_scores.empty() || s.id_scores.empty()) {
    throw DataError("metric needs both OOD and ID scores (got " +
                    std::to_string(s.ood_scores.size()) + " OOD, " +
                    std::to_string(s.id_scores.size()) + " ID)");
  }
}

struct Labeled {
  double score;
  bool ood;
};

// All scores sorted by descending value.
std::vector<Labeled> descending(const ScoredSet& s) {
  std::vector<Labeled> all;
  all.reserve(s.ood_scores.size() + s.id_scores.size());
  for (const double v : s.ood_scores) all.push_back({v, true});
  for (const double v : s.id_scores) all.push_back({v, false});
  std::sort(all.begin(), all.end(), [](const Labeled& a, const Labeled& b) { return a.score > b.score; });
  return all;
}

}  // namespace

ScoredSet scored_set(const Dataset& dataset, const std::vector<OODScore>& scores,
                     std::optional<Split> only_split) {
  std::unordered_map<std::string, double> by_id;
  for (const auto& s : scores) by_id.emplace(s.id, s.value);
  ScoredSet out;
  for (const auto& r : dataset.records()) {
    if (!r.is_ood) continue;
    if (only_split && r.split != *only_split) continue;
    const auto it = by_id.find(r.id);
    if (it == by_id.end()) throw DataError("no score for evaluation record \"" + r.id + "\"");
    (*r.is_ood ? out.ood_scores : out.id_scores).push_back(it->second);
  }
  return out;
}

double auroc(const ScoredSet& s) {
  require_both(s);
  auto all = descending(s);
  std::reverse(all.begin(), all.end());  // ascending
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    // Ranks i+1 .. j share their midrank.
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (all[t].ood) rank_sum += midrank;
    }
    i = j;
  }
  const auto n_ood = static_cast<double>(s.ood_scores.size());
  const auto n_id = static_cast<double>(s.id_scores.size());
  const double u = rank_sum - n_ood * (n_ood + 1.0) / 2.0;
  return u / (n_ood * n_id);
}

double aupr_ood(const ScoredSet& s) {
  require_both(s);
  const auto all = descending(s);
  const auto positives = static_cast<double>(s.ood_scores.size());
  double tp = 0.0;
  double fp = 0.0;
  double ap = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    double group_tp = 0.0;
    std::size_t j = i;
    for (; j < all.size() && all[j].score == all[i].score; ++j) {
      if (all[j].ood) {
        group_tp += 1.0;
      } else {
        fp += 1.0;
      }
    }
    tp += group_tp;
    if (group_tp > 0.0) ap += (group_tp / positives) * (tp / (tp + fp));
    i = j;
  }
  return ap;
}

double fpr_at_tpr(const ScoredSet& s, double level) {
  require_both(s);
  if (!(level >= 0.0 && level <= 1.0)) throw UsageError("TPR level must lie in [0, 1]");
  const auto all = descending(s);
  const auto n_ood = static_cast<double>(s.ood_scores.size());
  const auto n_id = static_cast<double>(s.id_scores.size());
  double tp = 0.0;
  double fp = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    for (; j < all.size() && all[j].score == all[i].score; ++j) {
      if (all[j].ood) {
        tp += 1.0;
      } else {
        fp += 1.0;
      }
    }
    // Descending thresholds: the first that reaches the level is the largest.
    if (tp / n_ood >= level - 1e-12) return fp / n_id;
    i = j;
  }
  return 1.0;
}

double calibrate_threshold(std::span<const double> id_scores, double id_fpr_budget) {
  if (id_scores.empty()) throw DataError("threshold calibration needs at least one ID score");
  if (!(id_fpr_budget >= 0.0 && id_fpr_budget < 1.0)) {
    throw UsageError("ID false-positive budget must lie in [0, 1)");
  }
  std::vector<double> sorted(id_scores.begin(), id_scores.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - id_fpr_budget) * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

nlohmann::json EvalReport::to_json() const {
  return {{"auroc", auroc},   {"aupr_ood", aupr_ood}, {"fpr_at_95tpr", fpr_at_95tpr},
          {"n_id", n_id},     {"n_ood", n_ood},       {"config", config}};
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  EvalReport r;
  try {
    r.auroc = j.at("auroc").get<double>();
    r.aupr_ood = j.at("aupr_ood").get<double>();
    r.fpr_at_95tpr = j.at("fpr_at_95tpr").get<double>();
    r.n_id = j.at("n_id").get<std::size_t>();
    r.n_ood = j.at("n_ood").get<std::size_t>();
    if (j.contains("config")) r.config = j.at("config");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  return r;
}

EvalReport evaluate(const ScoredSet& s, nlohmann::json config) {
  EvalReport r;
  r.auroc = auroc(s);
  r.aupr_ood = aupr_ood(s);
  r.fpr_at_95tpr = fpr_at_tpr(s, 0.95);
  r.n_id = s.id_scores.size();
  r.n_ood = s.ood_scores.size();
  r.config = std::move(config);
  return r;
}

namespace {

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary m;
  const auto n = static_cast<double>(values.size());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std = std::sqrt(ss / n);
  return m;
}

std::set<std::string> key_set(const nlohmann::json& j) {
  std::set<std::string> keys;
  if (j.is_object()) {
    for (const auto& item : j.items()) keys.insert(item.key());
  }
  return keys;
}

}  // namespace

SummaryReport aggregate_splits(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw DataError("cannot aggregate an empty list of reports");
  const auto keys = key_set(reports.front().config);
  std::vector<double> a;
  std::vector<double> p;
  std::vector<double> f;
  for (const auto& r : reports) {
    if (key_set(r.config) != keys) throw DataError("reports have mismatched config shapes");
    a.push_back(r.auroc);
    p.push_back(r.aupr_ood);
    f.push_back(r.fpr_at_95tpr);
  }
  SummaryReport s;
  s.splits = reports;
  s.auroc = summarize(a);
  s.aupr_ood = summarize(p);
  s.fpr_at_95tpr = summarize(f);
  return s;
}

nlohmann::json SummaryReport::to_json() const {
  nlohmann::json per_split = nlohmann::json::array();
  for (const auto& r : splits) per_split.push_back(r.to_json());
  const auto metric = [](const MetricSummary& m) {
    return nlohmann::json{{"mean", m.mean}, {"std", m.std}};
  };
  return {{"splits", per_split},
          {"auroc", metric(auroc)},
          {"aupr_ood", metric(aupr_ood)},
          {"fpr_at_95tpr", metric(fpr_at_95tpr)}};
}

std::string summary_csv(const SummaryReport& summary) {
  std::ostringstream os;
  os.precision(17);
  os << "row,auroc,aupr_ood,fpr_at_95tpr,n_id,n_ood\n";
  for (std::size_t i = 0; i < summary.splits.size(); ++i) {
    const auto& r = summary.splits[i];
    os << "split" << i << ',' << r.auroc << ',' << r.aupr_ood << ',' << r.fpr_at_95tpr << ','
       << r.n_id << ',' << r.n_ood << '\n';
  }
  os << "mean," << summary.auroc.mean << ',' << summary.aupr_ood.mean << ','
     << summary.fpr_at_95tpr.mean << ",,\n";
  os << "std," << summary.auroc.std << ',' << summary.aupr_ood.std << ','
     << summary.fpr_at_95tpr.std << ",,\n";
  return os.str();
}

}  // namespace oodkit
