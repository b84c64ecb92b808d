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

#include "oodkit/gmm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "oodkit/error.hpp"
#include "oodkit/kmeans.hpp"
#include "oodkit/log.hpp"

namespace oodkit {
namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// log w_c + log N(x; mean_c, var_c) for every component.
void component_log_terms(const GmmModel& model, const double* x, Eigen::Index d,
                         const Vector& log_norm, double* out) {
  const auto c_count = model.weights.size();
  for (Eigen::Index c = 0; c < c_count; ++c) {
    double quad = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double diff = x[j] - model.means(c, j);
      quad += diff * diff / model.variances(c, j);
    }
    out[c] = std::log(model.weights(c)) + log_norm(c) - 0.5 * quad;
  }
}

Vector log_normalisers(const GmmModel& model) {
  const auto d = static_cast<double>(model.means.cols());
  Vector out(model.weights.size());
  for (Eigen::Index c = 0; c < model.weights.size(); ++c) {
    out(c) = -0.5 * (d * kLog2Pi + model.variances.row(c).array().log().sum());
  }
  return out;
}

double log_sum_exp(const double* v, Eigen::Index n) {
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) m = std::max(m, v[i]);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

// E-step: responsibilities (n x C) and the total log-likelihood.
double expectation(const GmmModel& model, const Matrix& points, Matrix& resp) {
  const Vector log_norm = log_normalisers(model);
  const auto c_count = model.weights.size();
  resp.resize(points.rows(), c_count);
  double total = 0.0;
  Vector terms(c_count);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    component_log_terms(model, points.row(i).data(), points.cols(), log_norm, terms.data());
    const double lse = log_sum_exp(terms.data(), c_count);
    total += lse;
    for (Eigen::Index c = 0; c < c_count; ++c) resp(i, c) = std::exp(terms(c) - lse);
  }
  return total;
}

void maximisation(GmmModel& model, const Matrix& points, const Matrix& resp) {
  const auto n = static_cast<double>(points.rows());
  for (Eigen::Index c = 0; c < model.weights.size(); ++c) {
    const double nk = resp.col(c).sum();
    // A component that lost all mass keeps its previous shape.
    if (!(nk > 1e-12)) {
      model.weights(c) = 1e-12;
      continue;
    }
    model.weights(c) = nk / n;
    RowVector mean = RowVector::Zero(points.cols());
    for (Eigen::Index i = 0; i < points.rows(); ++i) mean += resp(i, c) * points.row(i);
    mean /= nk;
    RowVector var = RowVector::Zero(points.cols());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      var += resp(i, c) * (points.row(i) - mean).array().square().matrix();
    }
    var /= nk;
    model.means.row(c) = mean;
    model.variances.row(c) = var.cwiseMax(model.variance_floor);
  }
  model.weights /= model.weights.sum();
}

}  // namespace

GmmModel fit_gmm(const Matrix& points, const GmmOptions& options) {
  const auto c_count = options.components;
  if (c_count < 1) throw UsageError("GMM needs at least one component");
  if (!(options.variance_floor > 0.0)) throw UsageError("GMM variance floor must be positive");
  if (points.cols() < 1) throw DataError("GMM points need dimension >= 1");
  if (static_cast<std::size_t>(points.rows()) < c_count) {
    throw DataError("GMM: " + std::to_string(points.rows()) + " points for " +
                    std::to_string(c_count) + " components");
  }
  const auto cc = static_cast<Eigen::Index>(c_count);
  const Eigen::Index d = points.cols();
  GmmModel model;
  model.variance_floor = options.variance_floor;
  model.weights = Vector::Constant(cc, 1.0 / static_cast<double>(c_count));
  model.means = Matrix(cc, d);
  model.variances = Matrix::Constant(cc, d, options.variance_floor);

  const bool all_identical =
      (points.rowwise() - points.row(0)).cwiseAbs().maxCoeff() == 0.0;
  if (all_identical && c_count > 1) {
    log::warn("GMM: all points identical; fit is degenerate, variances at the floor");
    model.means.rowwise() = points.row(0);
    model.fit_log.push_back(total_log_likelihood(model, points));
    return model;
  }

  std::vector<std::size_t> assignment(static_cast<std::size_t>(points.rows()), 0);
  if (c_count > 1) {
    KMeansResult km = kmeans(points, c_count, options.seed);
    assignment = std::move(km.assignment);
  }
  Matrix resp = Matrix::Zero(points.rows(), cc);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    resp(i, static_cast<Eigen::Index>(assignment[static_cast<std::size_t>(i)])) = 1.0;
  }
  maximisation(model, points, resp);

  const double n = static_cast<double>(points.rows());
  double previous = expectation(model, points, resp);
  model.fit_log.push_back(previous);
  for (int iter = 0; iter < options.max_iters; ++iter) {
    maximisation(model, points, resp);
    const double current = expectation(model, points, resp);
    model.fit_log.push_back(current);
    if (!std::isfinite(current)) throw NumericError("GMM: non-finite log-likelihood");
    if ((current - previous) / n < options.tol) break;
    previous = current;
  }
  return model;
}

double log_density(const GmmModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw DataError("point has dimension " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(model.dim()));
  }
  const Vector log_norm = log_normalisers(model);
  Vector terms(model.weights.size());
  component_log_terms(model, x.data(), static_cast<Eigen::Index>(x.size()), log_norm, terms.data());
  return log_sum_exp(terms.data(), terms.size());
}

Vector log_density(const GmmModel& model, const Matrix& points) {
  if (static_cast<std::size_t>(points.cols()) != model.dim()) {
    throw DataError("points have dimension " + std::to_string(points.cols()) +
                    ", model expects " + std::to_string(model.dim()));
  }
  const Vector log_norm = log_normalisers(model);
  Vector out(points.rows());
  Vector terms(model.weights.size());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    component_log_terms(model, points.row(i).data(), points.cols(), log_norm, terms.data());
    out(i) = log_sum_exp(terms.data(), terms.size());
  }
  return out;
}

double total_log_likelihood(const GmmModel& model, const Matrix& points) {
  return log_density(model, points).sum();
}

Decision decide_score(double ood_score, double threshold) {
  return {ood_score > threshold, ood_score};
}

Decision decide(const GmmModel& model, std::span<const double> x, double threshold) {
  return decide_score(-log_density(model, x), threshold);
}

}  // namespace oodkit
