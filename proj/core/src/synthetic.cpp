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

#include "oodkit/synthetic.hpp"

#include <Eigen/QR>
#include <string>

#include "oodkit/error.hpp"
#include "oodkit/random.hpp"

namespace oodkit {

SyntheticData make_synthetic(const SyntheticSpec& spec) {
  const int c = spec.n_id_clusters;
  if (c < 1 || spec.dim < c || spec.points_per_cluster < 2 || spec.n_train < 1 ||
      spec.n_valid < 0 || spec.n_train + spec.n_valid >= spec.points_per_cluster) {
    throw UsageError("invalid synthetic benchmark spec");
  }
  Rng rng(spec.seed);

  // Scaled standard basis of R^c, centred: a regular simplex with the
  // requested edge length.
  Matrix simplex = Matrix::Identity(c, c) * (spec.center_distance / std::sqrt(2.0));
  const RowVector mean = simplex.colwise().mean();
  simplex.rowwise() -= mean;

  Matrix gauss(spec.dim, spec.dim);
  for (Eigen::Index i = 0; i < gauss.rows(); ++i) {
    for (Eigen::Index j = 0; j < gauss.cols(); ++j) gauss(i, j) = rng.normal();
  }
  const Matrix rotation = Eigen::HouseholderQR<Matrix>(gauss).householderQ();

  SyntheticData out;
  out.id_centers = Matrix::Zero(c, spec.dim);
  out.id_centers.leftCols(c) = simplex;
  out.id_centers = out.id_centers * rotation.transpose();

  const Vector centroid = out.id_centers.colwise().mean().transpose();
  Vector dir = out.id_centers.row(0).transpose() - centroid;
  if (dir.norm() == 0.0) {
    dir = rotation.col(0);
  } else {
    dir.normalize();
  }
  out.ood_center = out.id_centers.row(0).transpose() + spec.ood_offset * dir;

  const int n = spec.points_per_cluster;
  std::vector<Record> records;
  std::vector<std::string> ids;
  Matrix values((c + 1) * n, spec.dim);
  Eigen::Index row = 0;
  auto draw = [&](const Vector& center) {
    for (int j = 0; j < spec.dim; ++j) values(row, j) = center(j) + spec.noise_std * rng.normal();
    ++row;
  };
  for (int k = 0; k <= c; ++k) {
    const bool ood = k == c;
    const Vector center = ood ? out.ood_center : Vector(out.id_centers.row(k).transpose());
    const std::string label = ood ? "ood" : "c" + std::to_string(k);
    for (int i = 0; i < n; ++i) {
      Record r;
      r.id = label + "-" + std::to_string(i);
      r.label = label;
      if (ood) {
        r.split = i < n / 2 ? Split::valid : Split::test;
      } else if (i < spec.n_train) {
        r.split = Split::train;
      } else if (i < spec.n_train + spec.n_valid) {
        r.split = Split::valid;
      } else {
        r.split = Split::test;
      }
      if (r.split != Split::train) r.is_ood = ood;
      r.text = "synthetic " + r.id;
      ids.push_back(r.id);
      records.push_back(std::move(r));
      draw(center);
    }
  }
  out.dataset = Dataset(std::move(records));
  out.embeddings = EmbeddingSet(std::move(ids), std::move(values));
  return out;
}

}  // namespace oodkit
