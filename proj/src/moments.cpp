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

#include "nscorr/moments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "nscorr/error.hpp"

namespace nscorr {

namespace {

// [first, last] grid values where rho > 0.
std::optional<std::pair<double, double>> positive_range(const DensityCurve& c) {
  std::optional<std::pair<double, double>> out;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    if (c.rho[i] <= 0.0) continue;
    // Linear interpolation spreads mass to the neighbouring nodes.
    const double lo = c.grid[i ? i - 1 : i];
    const double hi = c.grid[i + 1 < c.grid.size() ? i + 1 : i];
    if (!out) {
      out.emplace(lo, hi);
    } else {
      out->second = hi;
    }
  }
  return out;
}

// Cumulative trapezoid mass at each grid node.
std::vector<double> cumulative(const DensityCurve& c) {
  std::vector<double> cum(c.grid.size(), 0.0);
  for (std::size_t i = 1; i < c.grid.size(); ++i) {
    cum[i] = cum[i - 1] + 0.5 * (c.rho[i] + c.rho[i - 1]) * (c.grid[i] - c.grid[i - 1]);
  }
  return cum;
}

// Exact mass of the piecewise-linear curve on (-inf, x].
double mass_below(const DensityCurve& c, const std::vector<double>& cum, double x) {
  const auto& g = c.grid;
  if (x <= g.front()) return 0.0;
  if (x >= g.back()) return cum.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin());
  const std::size_t lo = hi - 1;
  const double dx = x - g[lo];
  const double slope = (c.rho[hi] - c.rho[lo]) / (g[hi] - g[lo]);
  return cum[lo] + dx * (c.rho[lo] + 0.5 * slope * dx);
}

}  // namespace

CurveDistance curve_distance(const DensityCurve& a, const DensityCurve& b) {
  a.validate();
  b.validate();
  const auto ra = positive_range(a);
  const auto rb = positive_range(b);
  if (!ra || !rb || ra->second <= rb->first || rb->second <= ra->first) {
    fail(ErrorCode::kDisjointSupports, "density curves have disjoint supports");
  }
  std::vector<double> grid;
  grid.reserve(a.grid.size() + b.grid.size());
  std::merge(a.grid.begin(), a.grid.end(), b.grid.begin(), b.grid.end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  CurveDistance out;
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = std::abs(interpolate(a, grid[i]) - interpolate(b, grid[i]));
    out.sup = std::max(out.sup, d);
    if (i) out.l1 += 0.5 * (d + prev) * (grid[i] - grid[i - 1]);
    prev = d;
  }
  return out;
}

double density_moment(const DensityCurve& curve, int order) {
  if (order < 0) fail(ErrorCode::kParameterOutOfRange, "moment order must be >= 0");
  double sum = 0.0;
  for (std::size_t i = 1; i < curve.grid.size(); ++i) {
    const double left = std::pow(curve.grid[i - 1], order) * curve.rho[i - 1];
    const double right = std::pow(curve.grid[i], order) * curve.rho[i];
    sum += 0.5 * (left + right) * (curve.grid[i] - curve.grid[i - 1]);
  }
  return sum;
}

double raw_moment(const std::vector<std::vector<double>>& all_eigs, int order) {
  if (order < 0) fail(ErrorCode::kParameterOutOfRange, "moment order must be >= 0");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& row : all_eigs) {
    for (double v : row) sum += std::pow(v, order);
    count += row.size();
  }
  if (!count) fail(ErrorCode::kEmptyInput, "no eigenvalues supplied");
  return sum / static_cast<double>(count);
}

DensityCurve project_onto_bins(const DensityCurve& theory,
                               const DensityCurve& histogram,
                               double* outside_mass) {
  theory.validate();
  const auto& edges = histogram.bin_edges;
  if (edges.size() < 2 || histogram.grid.size() != edges.size() + 1) {
    fail(ErrorCode::kParameterOutOfRange, "histogram curve lacks bin edges");
  }
  const std::vector<double> cum = cumulative(theory);
  DensityCurve out = histogram;
  out.origin = CurveOrigin::kTheory;
  out.tolerance = theory.tolerance;
  out.n_effective = 0;
  std::vector<double> below(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) below[k] = mass_below(theory, cum, edges[k]);
  out.rho.front() = 0.0;
  out.rho.back() = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    out.rho[k + 1] = (below[k + 1] - below[k]) / (edges[k + 1] - edges[k]);
  }
  if (outside_mass) *outside_mass = below.front() + (cum.back() - below.back());
  return out;
}

CurveDistance histogram_distance(const DensityCurve& histogram,
                                 const DensityCurve& theory) {
  double outside = 0.0;
  const DensityCurve projected = project_onto_bins(theory, histogram, &outside);
  CurveDistance d = curve_distance(histogram, projected);
  d.l1 += outside;
  return d;
}

DensityCurve restrict_below(const DensityCurve& curve, double edge) {
  DensityCurve out;
  out.origin = curve.origin;
  out.tolerance = curve.tolerance;
  out.n_effective = curve.n_effective;
  for (std::size_t i = 0; i < curve.grid.size() && curve.grid[i] <= edge; ++i) {
    out.grid.push_back(curve.grid[i]);
    out.rho.push_back(curve.rho[i]);
  }
  if (out.grid.size() < 2) fail(ErrorCode::kEmptyInput, "nothing left below the edge");
  const double mass = out.integral();
  if (!(mass > 0.0)) fail(ErrorCode::kEmptyInput, "no mass below the edge");
  for (double& r : out.rho) r /= mass;
  return out;
}

DensityCurve restrict_to(const DensityCurve& curve, double lo, double hi) {
  DensityCurve out;
  out.origin = curve.origin;
  out.tolerance = curve.tolerance;
  out.n_effective = curve.n_effective;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    if (curve.grid[i] < lo || curve.grid[i] > hi) continue;
    out.grid.push_back(curve.grid[i]);
    out.rho.push_back(curve.rho[i]);
  }
  if (out.grid.size() < 2) fail(ErrorCode::kEmptyInput, "window holds fewer than two points");
  return out;
}

Matrix exact_mean_c(const PartitionedCorrelation& corr, const EnsembleConfig& cfg) {
  if (corr.n() != cfg.n || corr.m() != cfg.m) {
    fail(ErrorCode::kDimensionMismatch, "correlation model and ensemble dimensions differ");
  }
  cfg.validate();
  Matrix mean = corr.eta() * corr.eta().transpose();
  mean.diagonal().array() += cfg.kappa_m();
  return 0.5 * (mean + mean.transpose());
}

bool ComparisonReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ThresholdCheck& c) { return c.pass; });
}

void ComparisonReport::add_check(std::string name, double value, double limit,
                                 bool upper_bound) {
  ThresholdCheck check;
  check.name = std::move(name);
  check.value = value;
  check.limit = limit;
  check.upper_bound = upper_bound;
  check.pass = upper_bound ? value <= limit : value >= limit;
  if (!std::isfinite(value)) check.pass = false;
  checks.push_back(std::move(check));
}

std::vector<MomentRow> moment_table(const DensityCurve* theory,
                                    const std::vector<std::vector<double>>* eigs,
                                    std::optional<double> analytic_first,
                                    int max_order) {
  std::vector<MomentRow> rows;
  for (int k = 1; k <= max_order; ++k) {
    MomentRow row;
    row.order = k;
    if (eigs) row.empirical = raw_moment(*eigs, k);
    if (theory) row.theory = density_moment(*theory, k);
    if (k == 1) row.analytic = analytic_first;
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(const ComparisonReport& report) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json moments = nlohmann::json::array();
  for (const auto& row : report.moment_table) {
    moments.push_back({{"order", row.order},
                       {"empirical", opt(row.empirical)},
                       {"theory", opt(row.theory)},
                       {"analytic", opt(row.analytic)}});
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"limit", c.limit},
                      {"kind", c.upper_bound ? "max" : "min"},
                      {"pass", c.pass}});
  }
  return {{"l1_distance", opt(report.l1_distance)},
          {"sup_distance", opt(report.sup_distance)},
          {"normalization_defect", opt(report.normalization_defect)},
          {"moment_table", moments},
          {"checks", checks},
          {"pass", report.pass()}};
}

std::string summarize(const ComparisonReport& report) {
  std::ostringstream out;
  out << std::setprecision(6);
  if (report.l1_distance) out << "L1 distance:          " << *report.l1_distance << '\n';
  if (report.sup_distance) out << "sup distance:         " << *report.sup_distance << '\n';
  if (report.normalization_defect) {
    out << "normalization defect: " << *report.normalization_defect << '\n';
  }
  if (!report.moment_table.empty()) {
    out << "moments (order: empirical / theory / analytic)\n";
    for (const auto& row : report.moment_table) {
      auto show = [&](const std::optional<double>& v) {
        if (v) {
          out << *v;
        } else {
          out << '-';
        }
      };
      out << "  " << row.order << ": ";
      show(row.empirical);
      out << " / ";
      show(row.theory);
      out << " / ";
      show(row.analytic);
      out << '\n';
    }
  }
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.value
        << (c.upper_bound ? " <= " : " >= ") << c.limit << '\n';
  }
  out << (report.pass() ? "all thresholds passed" : "threshold failure") << '\n';
  return out.str();
}

}  // namespace nscorr
