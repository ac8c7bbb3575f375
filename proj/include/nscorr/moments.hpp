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

#ifndef NSCORR_MOMENTS_HPP
#define NSCORR_MOMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nscorr/corr_models.hpp"
#include "nscorr/ensemble.hpp"
#include "nscorr/spectra.hpp"

namespace nscorr {

struct CurveDistance {
  double l1 = 0.0;
  double sup = 0.0;
};

/// Both curves are linearly interpolated onto the union of their grids,
/// with zero outside each grid. Throws kDisjointSupports when the regions
/// carrying positive density do not overlap.
CurveDistance curve_distance(const DensityCurve& a, const DensityCurve& b);

/// Trapezoidal integral of lambda^order rho.
double density_moment(const DensityCurve& curve, int order);

/// Mean of lambda^order over every pooled eigenvalue.
double raw_moment(const std::vector<std::vector<double>>& all_eigs, int order);

/// Theory curve averaged over each histogram bin, laid out on the
/// histogram's grid. `outside_mass` receives the theory mass falling
/// outside the histogram's bin range.
DensityCurve project_onto_bins(const DensityCurve& theory,
                               const DensityCurve& histogram,
                               double* outside_mass = nullptr);

/// Histogram against a finely sampled theory curve: the theory is first
/// bin-averaged, then compared with curve_distance; theory mass outside the
/// histogram range is added to l1.
CurveDistance histogram_distance(const DensityCurve& histogram,
                                 const DensityCurve& theory);

/// Restriction of a curve to lambda <= edge, rescaled to unit mass.
DensityCurve restrict_below(const DensityCurve& curve, double edge);

/// Points of a curve with lo <= lambda <= hi, unscaled.
DensityCurve restrict_to(const DensityCurve& curve, double lo, double hi);

/// kappa_m * identity + eta eta^t.
Matrix exact_mean_c(const PartitionedCorrelation& corr, const EnsembleConfig& cfg);

struct MomentRow {
  int order = 0;
  std::optional<double> empirical;
  std::optional<double> theory;
  std::optional<double> analytic;
};

struct ThresholdCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool upper_bound = true;  // value <= limit; otherwise value >= limit
  bool pass = false;
};

struct ComparisonReport {
  std::optional<double> l1_distance;
  std::optional<double> sup_distance;
  std::vector<MomentRow> moment_table;  // orders 1, 2, ...
  std::optional<double> normalization_defect;
  std::vector<ThresholdCheck> checks;

  bool pass() const;
  void add_check(std::string name, double value, double limit, bool upper_bound = true);
};

/// Moment table for orders 1..max_order. Either source may be absent.
std::vector<MomentRow> moment_table(const DensityCurve* theory,
                                    const std::vector<std::vector<double>>* eigs,
                                    std::optional<double> analytic_first,
                                    int max_order = 4);

nlohmann::json to_json(const ComparisonReport& report);

/// Human-readable multi-line summary.
std::string summarize(const ComparisonReport& report);

}  // namespace nscorr

#endif  // NSCORR_MOMENTS_HPP
