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

#include "nscorr/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nscorr/error.hpp"
#include "nscorr/format.hpp"
#include "nscorr/linalg.hpp"

namespace nscorr {

namespace {

void require_square_symmetric(const Eigen::MatrixXd& mat) {
  if (mat.rows() != mat.cols() || !is_symmetric(mat)) {
    fail(ErrorCode::kNonSymmetricInput,
         "eigensolver needs a square symmetric matrix");
  }
}

std::vector<double> pooled_sorted(
    const std::vector<std::vector<double>>& all_eigs) {
  std::vector<double> pooled;
  std::size_t total = 0;
  for (const auto& row : all_eigs) total += row.size();
  pooled.reserve(total);
  for (const auto& row : all_eigs) pooled.insert(pooled.end(), row.begin(), row.end());
  if (pooled.empty()) fail(ErrorCode::kEmptyInput, "no eigenvalues supplied");
  for (double v : pooled) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::kParameterOutOfRange, "non-finite eigenvalue");
    }
  }
  std::sort(pooled.begin(), pooled.end());
  return pooled;
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<double> eigenvalues_sym(const Eigen::MatrixXd& mat) {
  require_square_symmetric(mat);
  if (mat.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      mat, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kConvergenceFailure, "symmetric eigensolver did not converge");
  }
  const Eigen::VectorXd& evals = solver.eigenvalues();
  // Cheap reconstruction check without eigenvectors: the spectrum must
  // reproduce the trace.
  const double scale = std::max(1.0, mat.norm() * std::sqrt(double(mat.rows())));
  if (std::abs(evals.sum() - mat.trace()) > 1e-9 * scale) {
    fail(ErrorCode::kConvergenceFailure, "eigenvalues do not reproduce the trace");
  }
  return {evals.data(), evals.data() + evals.size()};
}

SymmetricEigen eigen_decompose_sym(const Eigen::MatrixXd& mat) {
  require_square_symmetric(mat);
  SymmetricEigen out;
  if (mat.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kConvergenceFailure, "symmetric eigensolver did not converge");
  }
  const Eigen::VectorXd& evals = solver.eigenvalues();
  out.values.assign(evals.data(), evals.data() + evals.size());
  out.vectors = solver.eigenvectors();
  const double norm = std::max(mat.norm(), std::numeric_limits<double>::min());
  out.residual =
      (mat * out.vectors - out.vectors * evals.asDiagonal()).norm() / norm;
  if (out.residual >= 1e-9) {
    std::ostringstream msg;
    msg << "eigendecomposition residual " << out.residual << " exceeds 1e-9";
    fail(ErrorCode::kConvergenceFailure, msg.str());
  }
  return out;
}

const char* curve_origin_name(CurveOrigin origin) noexcept {
  return origin == CurveOrigin::kEmpirical ? "Empirical" : "Theory";
}

double DensityCurve::integral() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    sum += 0.5 * (rho[i] + rho[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return sum;
}

void DensityCurve::validate() const {
  if (grid.size() != rho.size()) {
    fail(ErrorCode::kDimensionMismatch, "grid and rho differ in length");
  }
  if (grid.size() < 2) {
    fail(ErrorCode::kEmptyInput, "a density curve needs at least two points");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(rho[i])) {
      fail(ErrorCode::kParameterOutOfRange, "non-finite curve value");
    }
    if (rho[i] < 0.0) fail(ErrorCode::kParameterOutOfRange, "negative density");
    if (i && !(grid[i] > grid[i - 1])) {
      fail(ErrorCode::kParameterOutOfRange, "grid is not strictly increasing");
    }
  }
}

double interpolate(const DensityCurve& curve, double x) {
  const auto& g = curve.grid;
  if (g.empty() || x < g.front() || x > g.back()) return 0.0;
  auto it = std::upper_bound(g.begin(), g.end(), x);
  if (it == g.end()) return curve.rho.back();
  const auto hi = static_cast<std::size_t>(it - g.begin());
  if (hi == 0) return curve.rho.front();
  const std::size_t lo = hi - 1;
  const double w = (x - g[lo]) / (g[hi] - g[lo]);
  return (1.0 - w) * curve.rho[lo] + w * curve.rho[hi];
}

DensityCurve empirical_density(const std::vector<std::vector<double>>& all_eigs,
                               const BinSpec& bins) {
  const std::vector<double> pooled = pooled_sorted(all_eigs);
  const auto total = static_cast<double>(pooled.size());
  double lo = bins.lo.value_or(pooled.front());
  double hi = bins.hi.value_or(pooled.back());
  if (bins.count < 0 || hi < lo) {
    fail(ErrorCode::kParameterOutOfRange, "invalid histogram specification");
  }

  DensityCurve curve;
  curve.origin = CurveOrigin::kEmpirical;
  curve.n_effective = static_cast<long long>(pooled.size());

  if (hi == lo) {
    // Degenerate sample: one bin of nominal width around the common value.
    const double width = 1e-3 * std::max(1.0, std::abs(lo));
    curve.grid = {lo - width, lo, lo + width};
    curve.rho = {0.0, 1.0 / width, 0.0};
    curve.bin_edges = {lo - 0.5 * width, lo + 0.5 * width};
    curve.tolerance = 1e-12;
    return curve;
  }

  int count = bins.count;
  if (count == 0) {
    const double iqr = sorted_quantile(pooled, 0.75) - sorted_quantile(pooled, 0.25);
    const double width = 2.0 * iqr / std::cbrt(total);
    count = width > 0.0 ? static_cast<int>(std::ceil((hi - lo) / width)) : 10;
    count = std::clamp(count, 10, 100000);
  }
  const double width = (hi - lo) / count;
  std::vector<long long> counts(static_cast<std::size_t>(count), 0);
  long long inside = 0;
  for (double v : pooled) {
    if (v < lo || v > hi) continue;
    auto k = static_cast<long long>(std::floor((v - lo) / width));
    k = std::clamp<long long>(k, 0, count - 1);
    ++counts[static_cast<std::size_t>(k)];
    ++inside;
  }

  curve.bin_edges.resize(static_cast<std::size_t>(count) + 1);
  for (int k = 0; k <= count; ++k) curve.bin_edges[k] = lo + k * width;
  curve.bin_edges.back() = hi;
  curve.grid.reserve(static_cast<std::size_t>(count) + 2);
  curve.rho.reserve(static_cast<std::size_t>(count) + 2);
  curve.grid.push_back(lo - 0.5 * width);
  curve.rho.push_back(0.0);
  for (int k = 0; k < count; ++k) {
    curve.grid.push_back(lo + (k + 0.5) * width);
    curve.rho.push_back(static_cast<double>(counts[k]) / (total * width));
  }
  curve.grid.push_back(hi + 0.5 * width);
  curve.rho.push_back(0.0);
  curve.tolerance = 1e-12 + (total - static_cast<double>(inside)) / total;
  return curve;
}

SampleMoments sample_moments(std::span<const double> values) {
  SampleMoments out;
  if (values.empty()) fail(ErrorCode::kEmptyInput, "no values for moments");
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  out.mean = mean;
  if (values.size() < 2) return out;
  out.variance = m2 / (n - 1.0);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return out;
}

OutlierStats outlier_stats(const std::vector<std::vector<double>>& all_eigs,
                           double bulk_edge) {
  if (all_eigs.empty()) fail(ErrorCode::kEmptyInput, "no realizations supplied");
  OutlierStats stats;
  stats.bulk_edge = bulk_edge;
  stats.values.reserve(all_eigs.size());
  std::size_t single = 0;
  for (const auto& row : all_eigs) {
    if (row.empty()) fail(ErrorCode::kEmptyInput, "empty realization");
    stats.values.push_back(*std::max_element(row.begin(), row.end()));
    const auto above = std::count_if(row.begin(), row.end(),
                                     [&](double v) { return v > bulk_edge; });
    if (above == 1) ++single;
  }
  const SampleMoments mom = sample_moments(stats.values);
  stats.mean = mom.mean;
  stats.variance = mom.variance;
  stats.skewness = mom.skewness;
  stats.excess_kurtosis = mom.excess_kurtosis;
  stats.separation_gap =
      *std::min_element(stats.values.begin(), stats.values.end()) - bulk_edge;
  stats.fraction_single_above =
      static_cast<double>(single) / static_cast<double>(all_eigs.size());
  return stats;
}

double pooled_quantile(const std::vector<std::vector<double>>& all_eigs,
                       double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    fail(ErrorCode::kParameterOutOfRange, "quantile level outside [0,1]");
  }
  return sorted_quantile(pooled_sorted(all_eigs), q);
}

std::vector<std::vector<double>> remove_above(
    const std::vector<std::vector<double>>& all_eigs, double edge) {
  std::vector<std::vector<double>> out;
  out.reserve(all_eigs.size());
  for (const auto& row : all_eigs) {
    std::vector<double> kept;
    kept.reserve(row.size());
    for (double v : row) {
      if (v <= edge) kept.push_back(v);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

void write_curve_csv(const std::string& path, const DensityCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot open " + path);
  out << "lambda,rho\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << format_double(curve.grid[i]) << ',' << format_double(curve.rho[i])
        << '\n';
  }
  if (!out) fail(ErrorCode::kIoError, "failed writing " + path);
}

DensityCurve read_curve_csv(const std::string& path, CurveOrigin origin) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "lambda,rho") {
    fail(ErrorCode::kIoError, path + ": missing lambda,rho header");
  }
  DensityCurve curve;
  curve.origin = origin;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorCode::kIoError, path + ": bad row");
    try {
      curve.grid.push_back(std::stod(line.substr(0, comma)));
      curve.rho.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::kIoError, path + ": unparsable number");
    }
  }
  curve.validate();
  return curve;
}

nlohmann::json to_json(const OutlierStats& stats) {
  return {{"count", stats.values.size()},
          {"mean", stats.mean},
          {"variance", stats.variance},
          {"skewness", stats.skewness},
          {"excess_kurtosis", stats.excess_kurtosis},
          {"bulk_edge", stats.bulk_edge},
          {"separation_gap", stats.separation_gap},
          {"separated", stats.separated()},
          {"fraction_single_above", stats.fraction_single_above},
          {"values", stats.values}};
}

nlohmann::json curve_metadata(const DensityCurve& curve) {
  return {{"origin", curve_origin_name(curve.origin)},
          {"points", curve.grid.size()},
          {"lambda_min", curve.grid.empty() ? 0.0 : curve.grid.front()},
          {"lambda_max", curve.grid.empty() ? 0.0 : curve.grid.back()},
          {"integral", curve.integral()},
          {"tolerance", curve.tolerance},
          {"n_effective", curve.n_effective}};
}

}  // namespace nscorr
