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

#ifndef NSCORR_LINALG_HPP
#define NSCORR_LINALG_HPP

#include <Eigen/Dense>

namespace nscorr {

/// Entrywise |x_ij - x_ji| <= rel_tol * max(1, max|x|).
bool is_symmetric(const Eigen::MatrixXd& x, double rel_tol = 1e-12);

/// V diag(lambda^p) V^t for a symmetric positive definite input. No
/// eigenvalue clipping: a nonpositive eigenvalue raises
/// ModelNotPositiveDefinite.
Eigen::MatrixXd symmetric_power(const Eigen::MatrixXd& x, double p);

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& x) {
  return 0.5 * (x + x.transpose());
}

}  // namespace nscorr

#endif  // NSCORR_LINALG_HPP
