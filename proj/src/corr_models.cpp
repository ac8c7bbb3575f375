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

#include "nscorr/corr_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nscorr/error.hpp"
#include "nscorr/linalg.hpp"

namespace nscorr {

namespace {

void require_unit_interval(const char* name, double value, bool allow_zero) {
  const bool ok = (allow_zero ? value >= 0.0 : value > 0.0) && value < 1.0 &&
                  std::isfinite(value);
  if (!ok) {
    std::ostringstream msg;
    msg << name << " = " << value << " must lie in "
        << (allow_zero ? "[0, 1)" : "(0, 1)");
    fail(ErrorCode::kParameterOutOfRange, msg.str());
  }
}

void require_positive_size(const char* name, int value) {
  if (value < 1) {
    fail(ErrorCode::kParameterOutOfRange,
         std::string(name) + " must be a positive integer");
  }
}

void require_correlation_block(const Matrix& block, const char* name) {
  if (block.rows() != block.cols() || block.rows() == 0) {
    fail(ErrorCode::kDimensionMismatch,
         std::string(name) + " must be a nonempty square matrix");
  }
  if (!is_symmetric(block)) {
    fail(ErrorCode::kNonSymmetricInput, std::string(name) + " is not symmetric");
  }
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    if (std::abs(block(i, i) - 1.0) > 1e-12) {
      fail(ErrorCode::kParameterOutOfRange,
           std::string(name) + " must have unit diagonal");
    }
  }
}

}  // namespace

const char* cross_kind_name(CrossKind kind) noexcept {
  switch (kind) {
    case CrossKind::kRankOne:
      return "RankOne";
    case CrossKind::kExpDecay:
      return "ExpDecay";
  }
  return "?";
}

CrossKind parse_cross_kind(const std::string& name) {
  if (name == "RankOne") return CrossKind::kRankOne;
  if (name == "ExpDecay") return CrossKind::kExpDecay;
  fail(ErrorCode::kParameterOutOfRange,
       "unknown cross kind '" + name + "' (expected RankOne or ExpDecay)");
}

void EqualCrossParams::validate() const {
  require_positive_size("n", n);
  require_positive_size("m", m);
  require_unit_interval("a", a, false);
  require_unit_interval("b", b, false);
  require_unit_interval("c", c, true);
}

PdDiagnostics validate_positive_definite(const Matrix& xi, double rel_tol) {
  if (xi.rows() != xi.cols() || xi.rows() == 0) {
    fail(ErrorCode::kNonSymmetricInput, "positive-definiteness test needs a "
                                        "nonempty square matrix");
  }
  if (!is_symmetric(xi)) {
    fail(ErrorCode::kNonSymmetricInput, "matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(xi, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kConvergenceFailure, "symmetric eigensolver failed");
  }
  const Vector& evals = solver.eigenvalues();
  PdDiagnostics diag;
  diag.min_eigenvalue = evals.minCoeff();
  diag.max_abs_eigenvalue = evals.cwiseAbs().maxCoeff();
  diag.tolerance = rel_tol * diag.max_abs_eigenvalue;
  diag.positive_definite = diag.min_eigenvalue > diag.tolerance;
  return diag;
}

bool sylvester_positive_definite(const Matrix& xi) {
  for (Eigen::Index k = 1; k <= xi.rows(); ++k) {
    const double minor = xi.topLeftCorner(k, k).partialPivLu().determinant();
    if (!(minor > 0.0)) return false;
  }
  return true;
}

Matrix equal_cross_matrix(int k, double coeff) {
  require_positive_size("k", k);
  Matrix out = Matrix::Constant(k, k, coeff);
  out.diagonal().setOnes();
  return out;
}

std::vector<double> equal_cross_spectrum(int k, double coeff) {
  require_positive_size("k", k);
  require_unit_interval("coeff", coeff, false);
  std::vector<double> out(static_cast<std::size_t>(k - 1), 1.0 - coeff);
  out.push_back(k * coeff + 1.0 - coeff);
  return out;
}

Matrix equal_cross_inv_sqrt(int k, double coeff) {
  require_positive_size("k", k);
  require_unit_interval("coeff", coeff, false);
  const double degenerate = 1.0 / std::sqrt(1.0 - coeff);
  const double top = 1.0 / std::sqrt(k * coeff + 1.0 - coeff);
  Matrix out = Matrix::Constant(k, k, -(degenerate - top) / k);
  out.diagonal().array() += degenerate;
  return out;
}

Matrix cross_block(int n, int m, double c, CrossKind kind) {
  require_positive_size("n", n);
  require_positive_size("m", m);
  if (kind == CrossKind::kRankOne) return Matrix::Constant(n, m, c);
  Matrix out(n, m);
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) {
      out(j, r) = (j == r) ? c : std::pow(c, std::abs(j - r));
    }
  }
  return out;
}

std::vector<double> RankOneXiSpectrum::all() const {
  std::vector<double> out{plus, minus};
  for (const auto& [value, mult] : degenerate) {
    out.insert(out.end(), static_cast<std::size_t>(mult), value);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RankOneXiSpectrum rank_one_xi_eigs(const EqualCrossParams& params) {
  params.validate();
  if (params.kind != CrossKind::kRankOne) {
    fail(ErrorCode::kParameterOutOfRange,
         "closed-form xi spectrum needs the RankOne cross block");
  }
  const double nm_c2 = double(params.n) * params.m * params.c * params.c;
  RankOneXiSpectrum s;
  s.lambda_aa = params.n * params.a + 1.0 - params.a;
  s.lambda_bb = params.m * params.b + 1.0 - params.b;
  const double diff = s.lambda_aa - s.lambda_bb;
  s.plus = 0.5 * (s.lambda_aa + s.lambda_bb + std::sqrt(diff * diff + 4 * nm_c2));
  // plus * minus = lambda_aa lambda_bb - n m c^2
  s.minus = (s.lambda_aa * s.lambda_bb - nm_c2) / s.plus;
  if (params.n > 1) s.degenerate.emplace_back(1.0 - params.a, params.n - 1);
  if (params.m > 1) s.degenerate.emplace_back(1.0 - params.b, params.m - 1);
  return s;
}

bool rank_one_admissible(const EqualCrossParams& params) {
  const double lambda_aa = params.n * params.a + 1.0 - params.a;
  const double lambda_bb = params.m * params.b + 1.0 - params.b;
  const double product = lambda_aa * lambda_bb;
  const double nm_c2 = double(params.n) * params.m * params.c * params.c;
  return product - nm_c2 > 1e-14 * product;
}

double zeta_rank_one_eig(const EqualCrossParams& params) {
  params.validate();
  if (params.kind != CrossKind::kRankOne) {
    fail(ErrorCode::kParameterOutOfRange,
         "closed-form zeta eigenvalue needs the RankOne cross block");
  }
  const auto spec = rank_one_xi_eigs(params);
  if (!rank_one_admissible(params)) {
    throw NotPositiveDefinite("rank-one model violates lambda_aa*lambda_bb > "
                              "n*m*c^2",
                              spec.minus);
  }
  return double(params.n) * params.m * params.c * params.c /
         (spec.lambda_aa * spec.lambda_bb);
}

double PartitionedCorrelation::zeta_mean() const {
  if (zeta_eigs_.empty()) return 0.0;
  return std::accumulate(zeta_eigs_.begin(), zeta_eigs_.end(), 0.0) /
         static_cast<double>(zeta_eigs_.size());
}

Matrix PartitionedCorrelation::assemble() const {
  const int n = this->n();
  const int m = this->m();
  Matrix xi(n + m, n + m);
  xi.topLeftCorner(n, n) = xi_aa_;
  xi.topRightCorner(n, m) = xi_ab_;
  xi.bottomLeftCorner(m, n) = xi_ab_.transpose();
  xi.bottomRightCorner(m, m) = xi_bb_;
  return xi;
}

void PartitionedCorrelation::finish() {
  eta_ = aa_inv_sqrt_ * xi_ab_ * bb_inv_sqrt_;
  // zeta spectrum as squared singular values of eta.
  Eigen::BDCSVD<Matrix> svd(eta_);
  const Vector& sv = svd.singularValues();
  zeta_eigs_.assign(static_cast<std::size_t>(n()), 0.0);
  for (Eigen::Index i = 0; i < sv.size() && i < n(); ++i) {
    zeta_eigs_[static_cast<std::size_t>(i)] = sv(i) * sv(i);
  }
  std::sort(zeta_eigs_.begin(), zeta_eigs_.end(), std::greater<>());
}

PartitionedCorrelation PartitionedCorrelation::from_blocks(Matrix xi_aa,
                                                           Matrix xi_bb,
                                                           Matrix xi_ab) {
  require_correlation_block(xi_aa, "xi_aa");
  require_correlation_block(xi_bb, "xi_bb");
  if (xi_ab.rows() != xi_aa.rows() || xi_ab.cols() != xi_bb.rows()) {
    fail(ErrorCode::kDimensionMismatch, "xi_ab must be n x m");
  }
  PartitionedCorrelation out;
  out.xi_aa_ = std::move(xi_aa);
  out.xi_bb_ = std::move(xi_bb);
  out.xi_ab_ = std::move(xi_ab);
  const auto diag = validate_positive_definite(out.assemble());
  if (!diag.positive_definite) {
    std::ostringstream msg;
    msg << "assembled xi is not positive definite (smallest eigenvalue "
        << diag.min_eigenvalue << ")";
    throw NotPositiveDefinite(msg.str(), diag.min_eigenvalue);
  }
  out.aa_inv_sqrt_ = symmetric_power(out.xi_aa_, -0.5);
  out.bb_inv_sqrt_ = symmetric_power(out.xi_bb_, -0.5);
  out.finish();
  return out;
}

PartitionedCorrelation build_equal_cross(const EqualCrossParams& params) {
  params.validate();
  PartitionedCorrelation out;
  out.xi_aa_ = equal_cross_matrix(params.n, params.a);
  out.xi_bb_ = equal_cross_matrix(params.m, params.b);
  out.xi_ab_ = cross_block(params.n, params.m, params.c, params.kind);

  if (params.kind == CrossKind::kRankOne) {
    if (!rank_one_admissible(params)) {
      const auto spec = rank_one_xi_eigs(params);
      std::ostringstream msg;
      msg << "rank-one model is not positive definite: lambda_aa*lambda_bb = "
          << spec.lambda_aa * spec.lambda_bb << " <= n*m*c^2 = "
          << double(params.n) * params.m * params.c * params.c;
      throw NotPositiveDefinite(msg.str(), spec.minus);
    }
  } else {
    const auto diag = validate_positive_definite(out.assemble());
    if (!diag.positive_definite) {
      std::ostringstream msg;
      msg << "assembled xi is not positive definite (smallest eigenvalue "
          << diag.min_eigenvalue << ")";
      throw NotPositiveDefinite(msg.str(), diag.min_eigenvalue);
    }
  }

  out.aa_inv_sqrt_ = equal_cross_inv_sqrt(params.n, params.a);
  out.bb_inv_sqrt_ = equal_cross_inv_sqrt(params.m, params.b);
  out.params_ = params;
  out.finish();
  return out;
}

nlohmann::json to_json(const PartitionedCorrelation& corr) {
  nlohmann::json j;
  j["n"] = corr.n();
  j["m"] = corr.m();
  if (const auto& p = corr.params()) {
    j["a"] = p->a;
    j["b"] = p->b;
    j["c"] = p->c;
    j["cross_kind"] = cross_kind_name(p->kind);
  } else {
    j["a"] = nullptr;
    j["b"] = nullptr;
    j["c"] = nullptr;
    j["cross_kind"] = "Custom";
  }
  j["zeta_eigs"] = corr.zeta_eigs();
  return j;
}

}  // namespace nscorr
