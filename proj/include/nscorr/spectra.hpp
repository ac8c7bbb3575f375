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

#ifndef NSCORR_SPECTRA_HPP
#define NSCORR_SPECTRA_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace nscorr {

/// Ascending eigenvalues of a symmetric matrix.
std::vector<double> eigenvalues_sym(const Eigen::MatrixXd& mat);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Eigen::MatrixXd vectors;     // columns match `values`
  double residual = 0.0;       // ||A V - V diag(values)||_F / ||A||_F
};

/// Full decomposition; raises ConvergenceFailure when the reconstruction
/// residual exceeds 1e-9.
SymmetricEigen eigen_decompose_sym(const Eigen::MatrixXd& mat);

enum class CurveOrigin { kEmpirical, kTheory };

const char* curve_origin_name(CurveOrigin origin) noexcept;

struct DensityCurve {
  std::vector<double> grid;  // strictly increasing
  std::vector<double> rho;   // nonnegative, same length as grid
  CurveOrigin origin = CurveOrigin::kTheory;
  long long n_effective = 0;  // pooled eigenvalue count for histograms
  double tolerance = 0.0;     // declared normalization tolerance
  // Histograms only: edges of the populated bins. The grid holds their
  // midpoints plus one empty bin on either side, so the trapezoid rule over
  // the grid reproduces the histogram mass exactly.
  std::vector<double> bin_edges;

  /// Trapezoidal integral of rho over the grid.
  double integral() const;

  /// Throws kParameterOutOfRange on malformed curves.
  void validate() const;
};

/// Linear interpolation with zero extension outside the grid.
double interpolate(const DensityCurve& curve, double x);

struct BinSpec {
  int count = 0;  // 0 selects the Freedman-Diaconis width (at least 10 bins)
  std::optional<double> lo;
  std::optional<double> hi;
};

DensityCurve empirical_density(const std::vector<std::vector<double>>& all_eigs,
                               const BinSpec& bins = {});

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

SampleMoments sample_moments(std::span<const double> values);

struct OutlierStats {
  std::vector<double> values;  // largest eigenvalue of each realization
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double bulk_edge = 0.0;
  double separation_gap = 0.0;  // min(values) - bulk_edge
  // Realizations with exactly one eigenvalue above bulk_edge.
  double fraction_single_above = 0.0;

  bool separated() const { return separation_gap > 0.0; }
};

OutlierStats outlier_stats(const std::vector<std::vector<double>>& all_eigs,
                           double bulk_edge);

/// Type-7 quantile of the pooled eigenvalues.
double pooled_quantile(const std::vector<std::vector<double>>& all_eigs,
                       double q);

/// Drops every eigenvalue above `edge` from each realization.
std::vector<std::vector<double>> remove_above(
    const std::vector<std::vector<double>>& all_eigs, double edge);

/// CSV with header `lambda,rho`.
void write_curve_csv(const std::string& path, const DensityCurve& curve);
DensityCurve read_curve_csv(const std::string& path, CurveOrigin origin);

nlohmann::json to_json(const OutlierStats& stats);
nlohmann::json curve_metadata(const DensityCurve& curve);

}  // namespace nscorr

#endif  // NSCORR_SPECTRA_HPP
