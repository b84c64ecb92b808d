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

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <string>

#include "oodkit/error.hpp"
#include "oodkit/likelihood.hpp"

namespace oodkit {

CorrelationResult length_correlation(std::span<const double> values,
                                     std::span<const double> lengths) {
  if (values.size() != lengths.size()) {
    throw DataError("length_correlation: " + std::to_string(values.size()) + " values vs " +
                    std::to_string(lengths.size()) + " lengths");
  }
  const std::size_t n = values.size();
  if (n < 3) throw DataError("length_correlation needs at least 3 points");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += values[i];
    mean_y += lengths[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = values[i] - mean_x;
    const double dy = lengths[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw DataError("length_correlation: zero variance input");

  CorrelationResult result;
  result.n = n;
  result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  const double one_minus_r2 = 1.0 - result.r * result.r;
  if (one_minus_r2 <= 0.0) {
    result.p_value = 0.0;
  } else {
    const double t = result.r * std::sqrt(dof / one_minus_r2);
    const boost::math::students_t dist(dof);
    result.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  }
  return result;
}

}  // namespace oodkit
