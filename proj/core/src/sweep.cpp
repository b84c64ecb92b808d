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

#include "oodkit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "oodkit/error.hpp"

namespace oodkit {
namespace {

[[noreturn]] void rethrow_with_context(const std::exception& e, const std::string& where) {
  const std::string msg = where + ": " + e.what();
  if (dynamic_cast<const UsageError*>(&e) != nullptr) throw UsageError(msg);
  if (dynamic_cast<const NumericError*>(&e) != nullptr) throw NumericError(msg);
  if (dynamic_cast<const ServiceError*>(&e) != nullptr) throw ServiceError(msg);
  throw DataError(msg);
}

}  // namespace

std::size_t select_best(const std::vector<SweepPoint>& table) {
  if (table.empty()) throw UsageError("sweep grid is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& a = table[i].report;
    const auto& b = table[best].report;
    if (a.aupr_ood != b.aupr_ood) {
      if (a.aupr_ood > b.aupr_ood) best = i;
    } else if (a.auroc != b.auroc) {
      if (a.auroc > b.auroc) best = i;
    } else if (table[i].k < table[best].k) {
      best = i;
    }
  }
  return best;
}

SweepResult sweep(const std::vector<int>& ks, const std::vector<double>& gammas,
                  const SweepEvaluator& evaluate_point, int threads) {
  if (ks.empty() || gammas.empty()) throw UsageError("sweep grid is empty");
  if (threads < 1) throw UsageError("sweep needs at least one thread");
  SweepResult result;
  for (const int k : ks) {
    for (const double gamma : gammas) result.table.push_back({k, gamma, {}});
  }

  // Each grid point owns its slot, so the table does not depend on
  // scheduling. The first failure in grid order is reported.
  std::vector<std::exception_ptr> errors(result.table.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.table.size(); i = next++) {
      try {
        result.table[i].report = evaluate_point(result.table[i].k, result.table[i].gamma);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), result.table.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    std::ostringstream where;
    where << "sweep point (K=" << result.table[i].k << ", gamma=" << result.table[i].gamma << ")";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      rethrow_with_context(e, where.str());
    }
  }
  result.best = result.table[select_best(result.table)];
  return result;
}

nlohmann::json SweepResult::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : table) {
    rows.push_back({{"k", p.k}, {"gamma", p.gamma}, {"report", p.report.to_json()}});
  }
  return {{"best", {{"k", best.k}, {"gamma", best.gamma}, {"report", best.report.to_json()}}},
          {"table", rows}};
}

std::string SweepResult::csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "k,gamma,auroc,aupr_ood,fpr_at_95tpr\n";
  for (const auto& p : table) {
    os << p.k << ',' << p.gamma << ',' << p.report.auroc << ',' << p.report.aupr_ood << ','
       << p.report.fpr_at_95tpr << '\n';
  }
  return os.str();
}

}  // namespace oodkit
