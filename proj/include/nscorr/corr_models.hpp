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

// Nonrandom correlation structures for the two-block Wishart model.
//
// The population correlation xi of the stacked (n+m) x T data matrix is
// partitioned into an n x n block xi_aa, an m x m block xi_bb and the
// n x m cross block xi_ab. Decorrelating each block leaves the cross
// correlation eta = xi_aa^{-1/2} xi_ab xi_bb^{-1/2}, and the spectrum of
// zeta = eta eta^t drives the deformation of the density of C.

#ifndef NSCORR_CORR_MODELS_HPP
#define NSCORR_CORR_MODELS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace nscorr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class CrossKind {
  kRankOne,   // [xi_ab]_jr = c
  kExpDecay,  // [xi_ab]_jr = c on the diagonal, c^|j-r| elsewhere
};

const char* cross_kind_name(CrossKind kind) noexcept;
CrossKind parse_cross_kind(const std::string& name);

struct EqualCrossParams {
  int n = 0;
  int m = 0;
  double a = 0.0;  // off-diagonal coefficient of xi_aa
  double b = 0.0;  // off-diagonal coefficient of xi_bb
  double c = 0.0;  // cross-block coefficient
  CrossKind kind = CrossKind::kRankOne;

  // Throws kParameterOutOfRange unless n, m >= 1, a, b in (0,1), c in [0,1).
  void validate() const;
};

struct PdDiagnostics {
  bool positive_definite = false;
  double min_eigenvalue = 0.0;
  double max_abs_eigenvalue = 0.0;
  double tolerance = 0.0;  // threshold the smallest eigenvalue had to clear
};

/// Smallest-eigenvalue test: positive definite iff
/// lambda_min > rel_tol * max|lambda|. Throws kNonSymmetricInput for
/// non-square or asymmetric input.
PdDiagnostics validate_positive_definite(const Matrix& xi,
                                         double rel_tol = 1e-12);

/// Leading-principal-minor chain. Only meant as an independent
/// cross-check on small matrices.
bool sylvester_positive_definite(const Matrix& xi);

class PartitionedCorrelation {
 public:
  /// Escape hatch for arbitrary dense blocks. Both diagonal blocks must be
  /// symmetric with unit diagonal, and the assembled xi strictly positive
  /// definite. Inverse square roots come from symmetric eigendecompositions.
  static PartitionedCorrelation from_blocks(Matrix xi_aa, Matrix xi_bb,
                                            Matrix xi_ab);

  int n() const { return static_cast<int>(xi_aa_.rows()); }
  int m() const { return static_cast<int>(xi_bb_.rows()); }

  const Matrix& xi_aa() const { return xi_aa_; }
  const Matrix& xi_bb() const { return xi_bb_; }
  const Matrix& xi_ab() const { return xi_ab_; }
  const Matrix& xi_aa_inv_sqrt() const { return aa_inv_sqrt_; }
  const Matrix& xi_bb_inv_sqrt() const { return bb_inv_sqrt_; }
  const Matrix& eta() const { return eta_; }

  /// Eigenvalues of zeta = eta eta^t, descending, length n.
  const std::vector<double>& zeta_eigs() const { return zeta_eigs_; }
  double zeta_mean() const;

  /// Parameters of the generating family, when built by build_equal_cross.
  const std::optional<EqualCrossParams>& params() const { return params_; }

  /// The full (n+m) x (n+m) correlation matrix.
  Matrix assemble() const;

 private:
  friend PartitionedCorrelation build_equal_cross(const EqualCrossParams&);

  PartitionedCorrelation() = default;
  void finish();  // eta and zeta spectrum from the stored blocks

  Matrix xi_aa_, xi_bb_, xi_ab_;
  Matrix aa_inv_sqrt_, bb_inv_sqrt_;
  Matrix eta_;
  std::vector<double> zeta_eigs_;
  std::optional<EqualCrossParams> params_;
};

PartitionedCorrelation build_equal_cross(const EqualCrossParams& params);

/// k x k matrix with unit diagonal and `coeff` everywhere else.
Matrix equal_cross_matrix(int k, double coeff);

/// Ascending spectrum: k-1 copies of 1-coeff, then k*coeff + 1 - coeff.
std::vector<double> equal_cross_spectrum(int k, double coeff);

/// Closed-form inverse square root of equal_cross_matrix(k, coeff).
Matrix equal_cross_inv_sqrt(int k, double coeff);

Matrix cross_block(int n, int m, double c, CrossKind kind);

struct RankOneXiSpectrum {
  double lambda_aa = 0.0;  // n*a + 1 - a
  double lambda_bb = 0.0;  // m*b + 1 - b
  double plus = 0.0;
  double minus = 0.0;
  // (value, multiplicity) pairs for 1-a and 1-b; pairs with zero
  // multiplicity are dropped.
  std::vector<std::pair<double, int>> degenerate;

  /// Every eigenvalue of xi with multiplicity, ascending.
  std::vector<double> all() const;
};

RankOneXiSpectrum rank_one_xi_eigs(const EqualCrossParams& params);

/// lambda_aa * lambda_bb > n m c^2 up to a 1e-14 relative margin.
bool rank_one_admissible(const EqualCrossParams& params);

/// The single nonzero eigenvalue n m c^2 / (lambda_aa lambda_bb) of zeta.
/// Throws ModelNotPositiveDefinite when the model is inadmissible.
double zeta_rank_one_eig(const EqualCrossParams& params);

/// {n, m, a, b, c, cross_kind, zeta_eigs}; the parameter fields are null
/// for models built from custom blocks.
nlohmann::json to_json(const PartitionedCorrelation& corr);

}  // namespace nscorr

#endif  // NSCORR_CORR_MODELS_HPP
