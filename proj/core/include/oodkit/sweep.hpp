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

#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "oodkit/metrics.hpp"

namespace oodkit {

struct SweepPoint {
  int k = 0;
  double gamma = 0.0;
  EvalReport report;
};

struct SweepResult {
  SweepPoint best;
  std::vector<SweepPoint> table;  // grid order: K outer, gamma inner

  nlohmann::json to_json() const;
  std::string csv() const;
};

// Runs the evaluator (train -> fit -> score on validation) at every grid
// point and selects the maximum AUPR_OOD; ties go to the higher AUROC, then
// the smaller K, then the earlier grid point. Evaluator failures are
// rethrown with the grid coordinates prepended.
using SweepEvaluator = std::function<EvalReport(int k, double gamma)>;

// Grid points run on up to `threads` workers; the evaluator must be safe to
// call concurrently. Results do not depend on the thread count.
SweepResult sweep(const std::vector<int>& ks, const std::vector<double>& gammas,
                  const SweepEvaluator& evaluate_point, int threads = 1);

// Index of the winning row under the selection rule above.
std::size_t select_best(const std::vector<SweepPoint>& table);

}  // namespace oodkit
