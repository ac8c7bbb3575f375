// Copyright 2026 The nscorr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nscorr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nscorr/error.hpp"

namespace nscorr {

bool is_symmetric(const Eigen::MatrixXd& x, double rel_tol) {
  if (x.rows() != x.cols()) return false;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  return (x - x.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Eigen::MatrixXd symmetric_power(const Eigen::MatrixXd& x, double p) {
  if (!is_symmetric(x)) {
    fail(ErrorCode::kNonSymmetricInput, "matrix power needs a symmetric input");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kConvergenceFailure, "symmetric eigensolver failed");
  }
  const Eigen::VectorXd& evals = solver.eigenvalues();
  if (!(evals.minCoeff() > 0.0)) {
    std::ostringstream msg;
    msg << "matrix power of a non-positive-definite matrix (smallest "
           "eigenvalue "
        << evals.minCoeff() << ")";
    throw NotPositiveDefinite(msg.str(), evals.minCoeff());
  }
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  const Eigen::VectorXd scaled = evals.array().pow(p).matrix();
  return symmetrized(vecs * scaled.asDiagonal() * vecs.transpose());
}

}  // namespace nscorr
