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

#include "oodkit/pca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "oodkit/error.hpp"

namespace oodkit {

PcaResult pca2d_project(const Matrix& points) {
  if (points.rows() < 3) throw DataError("PCA projection needs at least 3 points");
  if (points.cols() < 2) throw DataError("PCA projection needs dimension >= 2");
  const RowVector mean = points.colwise().mean();
  const Matrix centred = points.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centred.transpose() * centred) / static_cast<double>(points.rows());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericError("PCA eigendecomposition failed");

  PcaResult out;
  out.components.resize(2, points.cols());
  const Eigen::Index d = points.cols();
  for (int c = 0; c < 2; ++c) {
    // Eigenvalues come back ascending.
    const Eigen::Index col = d - 1 - c;
    RowVector v = solver.eigenvectors().col(col).transpose();
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::fabs(v(j)) > 1e-12) {
        if (v(j) < 0.0) v = -v;
        break;
      }
    }
    out.components.row(c) = v;
    out.explained(c) = std::max(0.0, solver.eigenvalues()(col));
  }
  out.coords = centred * out.components.transpose();
  return out;
}

std::string pca_csv(const std::vector<std::string>& ids, const Matrix& coords,
                    const std::vector<int>& is_ood) {
  std::ostringstream os;
  os.precision(17);
  os << "id,pc1,pc2,is_ood\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    os << ids[i] << ',' << coords(r, 0) << ',' << coords(r, 1) << ',';
    if (i < is_ood.size() && is_ood[i] >= 0) os << is_ood[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace oodkit
